"""
RTO Forge - Lab Application Framework
Aplicación FastAPI que expone testigos, trazas, cotas, escenarios y simulaciones
"""

import logging
from datetime import datetime
from typing import Any, Callable, Dict, Optional

from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from pydantic import ValidationError

from .cli import (
    PRESETS,
    build_scenario,
    cmd_bounds,
    cmd_scenario,
    cmd_simulate,
    cmd_trace,
    cmd_witness,
    read_samples,
    resolve_params,
    sim_report_model,
)
from .config_manager import ConfigManager
from .errors import ConfigError, DomainError
from .exactnum import parse_rational
from .netsim import available_replays
from .schemas import (
    BoundsRequest,
    BoundsResponse,
    ScenarioRequest,
    ScenarioResponse,
    SimReportModel,
    SimulateRequest,
    TraceRequest,
    TraceResponse,
    WitnessRequest,
    WitnessResponse,
)

logger = logging.getLogger(__name__)


def _optional_rational(value: Optional[str]):
    return parse_rational(value) if value not in (None, "") else None


class RtoForgeApp:
    """
    Aplicación base del laboratorio RTO

    Proporciona:
    - Gestión de configuración (valores por defecto de parámetros, escenarios y canal)
    - Endpoints para cada operación del toolkit
    - Traducción de errores de dominio a respuestas HTTP
    """

    def __init__(
        self,
        app_name: str,
        config_file: str,
        default_config: Dict[str, Any] = None,
        custom_routes: Optional[Callable] = None,
    ):
        self.app_name = app_name
        self.app = FastAPI(title=f"RTO Forge - {app_name}")
        self.config = ConfigManager(config_file, default_config)

        self._setup_base_routes()
        self._setup_toolkit_routes()

        if custom_routes:
            custom_routes(self)
        logger.info("%s ready (config: %s)", app_name, config_file)

    def _params(self, request, default_g=None):
        return resolve_params(self.config, request.alpha, request.beta, request.g, default_g)

    def _setup_base_routes(self):
        """Configura las rutas base: salud y configuración"""

        @self.app.get("/health")
        async def health_check():
            return {"status": "healthy", "app": self.app_name, "timestamp": datetime.now().isoformat()}

        @self.app.get("/config")
        async def get_config():
            return {"config": self.config.get(), "validation": self.config.validate_config()}

        @self.app.post("/config")
        async def update_config(config_data: Dict[str, Any]):
            """Actualiza la configuración; si queda inválida se restaura la anterior"""
            previous = self.config.get()
            try:
                updated_config = self.config.update(config_data)
            except ConfigError as e:
                raise HTTPException(status_code=400, detail=str(e))
            validation = self.config.validate_config()
            if not validation["valid"]:
                self.config.update(previous)
                raise HTTPException(status_code=400, detail=validation["issues"])
            return {"message": "Configuration updated successfully", "config": updated_config}

    def _setup_toolkit_routes(self):
        """Configura las rutas de las operaciones del toolkit"""

        @self.app.post("/witness", response_model=WitnessResponse)
        async def build_witness(request: WitnessRequest):
            try:
                return cmd_witness(request.alpha, request.epsilon, request.method, request.verify_horizon)
            except DomainError as e:
                raise HTTPException(status_code=400, detail=str(e))

        @self.app.post("/trace", response_model=TraceResponse)
        async def trace(request: TraceRequest):
            try:
                return cmd_trace(
                    self._params(request),
                    request.samples,
                    c=request.c,
                    r=request.r,
                    srtt_prior=request.srtt_prior,
                    rttvar_prior=request.rttvar_prior,
                )
            except (DomainError, ConfigError) as e:
                raise HTTPException(status_code=400, detail=str(e))

        @self.app.post("/trace/upload", response_model=TraceResponse)
        async def trace_upload(
            file: UploadFile = File(...),
            alpha: Optional[str] = Form(None),
            beta: Optional[str] = Form(None),
            g: Optional[str] = Form(None),
            c: Optional[str] = Form(None),
            r: Optional[str] = Form(None),
        ):
            """Traza a partir de un archivo de muestras subido (un racional por línea o CSV)"""
            try:
                content = (await file.read()).decode("utf-8")
                samples = read_samples(content.splitlines())
                params = resolve_params(
                    self.config, _optional_rational(alpha), _optional_rational(beta), _optional_rational(g)
                )
                return cmd_trace(params, samples, c=_optional_rational(c), r=_optional_rational(r))
            except (DomainError, ConfigError, UnicodeDecodeError) as e:
                raise HTTPException(status_code=400, detail=str(e))

        @self.app.post("/bounds", response_model=BoundsResponse, response_model_exclude_none=True)
        async def bounds(request: BoundsRequest):
            try:
                return cmd_bounds(
                    self._params(request),
                    request.c,
                    request.r,
                    request.srtt_prior,
                    request.rttvar_prior,
                    n=request.n,
                    m=request.m,
                    eps=request.eps,
                    target=request.target,
                    method=request.method,
                    rule=request.rule,
                    samples=request.samples,
                )
            except (DomainError, ConfigError) as e:
                raise HTTPException(status_code=400, detail=str(e))

        @self.app.post("/scenario/{preset}", response_model=ScenarioResponse)
        def scenario(preset: str, request: Optional[ScenarioRequest] = None):
            if preset not in PRESETS:
                raise HTTPException(status_code=404, detail=f"Unknown preset '{preset}'")
            request = request or ScenarioRequest()
            try:
                spec = build_scenario(
                    self.config, preset, request.length, request.seed, request.alpha, request.beta, request.g
                )
                response, _ = cmd_scenario(spec, preset, request.include_trace)
                return response
            except (DomainError, ConfigError) as e:
                raise HTTPException(status_code=400, detail=str(e))

        @self.app.post("/simulate", response_model=SimReportModel)
        def simulate(request: SimulateRequest):
            section = self.config.get("channel", {})
            try:
                channel = self.config.channel_config(
                    drop_prob=request.drop_prob,
                    dup_prob=request.dup_prob,
                    min_delay=request.min_delay,
                    max_delay=request.max_delay,
                    fifo_acks=request.fifo_acks,
                    seed=request.seed,
                )
                report = cmd_simulate(
                    channel,
                    request.n_packets,
                    self._params(request),
                    window=request.window or int(section.get("window", 1)),
                    max_ticks=request.max_ticks or section.get("max_ticks"),
                )
            except (DomainError, ConfigError, ValidationError) as e:
                raise HTTPException(status_code=400, detail=str(e))
            return sim_report_model(report)

        @self.app.post("/simulate/replay/{name}", response_model=SimReportModel)
        def simulate_replay(name: str):
            if name not in available_replays():
                raise HTTPException(status_code=404, detail=f"Unknown replay '{name}'")
            try:
                report = cmd_simulate(None, 1, self.config.rto_params(), replay_name=name)
            except ConfigError as e:
                raise HTTPException(status_code=400, detail=str(e))
            return sim_report_model(report)

    def get_app(self) -> FastAPI:
        return self.app

    def run(self, host: str = "0.0.0.0", port: int = 8020, **kwargs):
        """Ejecuta la aplicación"""
        import uvicorn

        uvicorn.run(self.app, host=host, port=port, **kwargs)
