"""
RTO Forge - Schemas
Modelos pydantic compartidos por la salida JSON del CLI y la API HTTP

Los racionales viajan como texto "p/q" (o "p"); al validar se normalizan a forma canónica.
"""

from typing import Annotated, Any, Dict, List, Optional

from pydantic import AfterValidator, BaseModel, Field

from .exactnum import format_rational, parse_rational


def _canonical_rational(value: str) -> str:
    return format_rational(parse_rational(value))


RationalText = Annotated[str, AfterValidator(_canonical_rational)]


class ParamsModel(BaseModel):
    """Parámetros opcionales de RTO; los ausentes se toman del archivo de configuración"""

    alpha: Optional[RationalText] = None
    beta: Optional[RationalText] = None
    g: Optional[RationalText] = None


class WitnessRequest(BaseModel):
    alpha: RationalText
    epsilon: RationalText
    method: str = "ceiling"
    verify_horizon: int = Field(default=10, ge=0, le=10_000)


class WitnessItem(BaseModel):
    method: str
    alpha: str
    epsilon: str
    delta: int
    checks: int
    failures: List[int] = []
    verified: bool


class WitnessResponse(BaseModel):
    results: List[WitnessItem]
    verified: bool


class TraceRowModel(BaseModel):
    step: int
    sample: str
    srtt: str
    rttvar: str
    rto: str
    L: Optional[str] = None
    H: Optional[str] = None
    rttvar_upper: Optional[str] = None
    timeout: Optional[bool] = None


class TraceRequest(ParamsModel):
    samples: List[RationalText] = Field(min_length=1)
    c: Optional[RationalText] = None
    r: Optional[RationalText] = None
    srtt_prior: Optional[RationalText] = None
    rttvar_prior: Optional[RationalText] = None


class TraceResponse(BaseModel):
    rows: List[TraceRowModel]
    bounds_applied: bool = False
    warnings: List[str] = []


class BoundsRequest(ParamsModel):
    c: RationalText
    r: RationalText
    srtt_prior: RationalText
    rttvar_prior: RationalText
    n: int = Field(default=0, ge=0)
    m: int = Field(default=0, ge=0)
    eps: Optional[RationalText] = None
    target: str = "L"
    method: str = "ceiling"
    rule: str = "sound"
    samples: Optional[List[RationalText]] = None


class BoundsResponse(BaseModel):
    n: int
    m: int
    L: str
    H: str
    delta_m: str
    rttvar_upper: str
    rule: str
    target: Optional[str] = None
    eps: Optional[str] = None
    convergence_n: Optional[int] = None


class ScenarioRequest(ParamsModel):
    length: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    include_trace: bool = False


class TimeoutSummary(BaseModel):
    count: int
    steps: List[int]
    spike_steps: List[int]


class ScenarioResponse(BaseModel):
    preset: str
    length: int
    summary: TimeoutSummary
    trace: Optional[List[TraceRowModel]] = None


class SimulateRequest(ParamsModel):
    n_packets: int = Field(default=10, ge=1)
    drop_prob: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    dup_prob: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    min_delay: Optional[int] = Field(default=None, ge=1)
    max_delay: Optional[int] = Field(default=None, ge=1)
    fifo_acks: Optional[bool] = None
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    window: Optional[int] = Field(default=None, ge=1)
    max_ticks: Optional[int] = Field(default=None, ge=1)


class SampleModel(BaseModel):
    packet_id: int
    rtt: int
    tick: int


class AmbiguityModel(BaseModel):
    tick: int
    ack: int
    packet_id: int
    candidate_rtts: List[int]


class InvariantModel(BaseModel):
    invariant_name: str
    tick: int
    details: Dict[str, Any] = {}


class SimReportModel(BaseModel):
    samples: List[SampleModel]
    trace: List[TraceRowModel]
    invariant_log: List[InvariantModel]
    ambiguities: List[AmbiguityModel]
    counters: Dict[str, int]
    completed: bool
    ticks: int
    final_rto: Optional[str] = None
