"""
RTO Forge - RTO Lab App
Laboratorio HTTP del cálculo exacto de RTO, sus cotas y el simulador de Karn
"""

import os
import sys

# Agregar el directorio raíz al path para importar core
sys.path.append(os.path.join(os.path.dirname(__file__), "../.."))

from fastapi.responses import HTMLResponse

from core.base_app import RtoForgeApp
from core.config_manager import DEFAULT_CONFIG
from core.netsim import available_replays
from core.settings import get_settings


def setup_lab_routes(lab: RtoForgeApp):
    """Configura rutas específicas del laboratorio"""

    @lab.app.get("/", response_class=HTMLResponse)
    async def lab_home():
        replays = "".join(f"<li><code>POST /simulate/replay/{name}</code></li>" for name in available_replays())
        return f"""<!DOCTYPE html>
<html lang="es">
<head><meta charset="utf-8"><title>RTO Lab</title></head>
<body>
  <h1>⏱️ RTO Lab</h1>
  <p>RFC 6298 en racionales exactos, testigos de convergencia y simulador de Karn.</p>
  <ul>
    <li><code>POST /witness</code></li>
    <li><code>POST /trace</code> y <code>POST /trace/upload</code></li>
    <li><code>POST /bounds</code></li>
    <li><code>POST /scenario/pathological</code>, <code>POST /scenario/uniform</code></li>
    <li><code>POST /simulate</code></li>
    {replays}
  </ul>
  <p>Documentación interactiva en <a href="/docs">/docs</a>.</p>
</body>
</html>"""


def create_app(config_file: str = None) -> RtoForgeApp:
    """Crea y configura la aplicación del laboratorio"""
    config_file = config_file or get_settings().config_file
    return RtoForgeApp("rto_lab", config_file, DEFAULT_CONFIG, setup_lab_routes)


# Para importar desde run.py
app_instance = create_app()
app = app_instance.get_app()
