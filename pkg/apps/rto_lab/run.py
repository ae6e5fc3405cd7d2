#!/usr/bin/env python3
"""
RTO Forge - RTO Lab Runner
Ejecuta el laboratorio HTTP del toolkit de RTO
"""

import uvicorn

from main import app
from core.settings import configure_logging, get_settings

if __name__ == "__main__":
    settings = get_settings()
    configure_logging(settings.log_level)

    print("⏱️ Starting RTO Lab...")
    print("📐 Exact RFC 6298 RTO, steady-state bounds and Karn simulator")
    print(f"🔗 Open http://localhost:{settings.port} in your browser")
    print("💡 Examples: /witness, /scenario/pathological, /simulate/replay/ambiguous-ack")
    print("=" * 50)

    uvicorn.run(app, host=settings.host, port=settings.port, log_level=settings.log_level.lower())
