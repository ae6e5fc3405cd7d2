"""
RTO Forge - CLI
Línea de órdenes: witness, trace, bounds, scenario y simulate

Códigos de salida: 0 éxito, 1 fallo de verificación o de invariantes, 2 error de uso.
Las operaciones cmd_* devuelven modelos de core.schemas y las reutiliza la API HTTP.
"""

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import asdict
from enum import Enum
from fractions import Fraction
from typing import IO, Iterable, List, Optional, Sequence, Tuple, Type, TypeVar

from pydantic import ValidationError

from .config_manager import ConfigManager
from .errors import ConfigError, DomainError, RationalParseError
from .exactnum import RationalLike, as_rational, format_rational, parse_rational, to_decimal_string
from .limitwit import DEFAULT_BRUTE_FORCE_CAP, WitnessMethod, witness
from .netsim import ChannelConfig, PolicyFactory, SimReport, available_replays, replay, resolve_replay, run_simulation
from .rtocalc import RtoParams, prior_state, run, run_from
from .scenario import ScenarioSpec, TimeoutReport, TraceRow, run_scenario
from .schemas import (
    AmbiguityModel,
    BoundsResponse,
    InvariantModel,
    SampleModel,
    ScenarioResponse,
    SimReportModel,
    TimeoutSummary,
    TraceResponse,
    TraceRowModel,
    WitnessItem,
    WitnessResponse,
)
from .settings import configure_logging, get_settings
from .steadystate import ConvergenceTarget, DeltaRule, SteadySpec, bound_report, convergence_n_for, is_steady_state

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

TRACE_COLUMNS = ("step", "sample", "srtt", "rttvar", "rto")
BOUND_COLUMNS = ("L", "H", "rttvar_upper")
RATIONAL_COLUMNS = ("sample", "srtt", "rttvar", "rto", "L", "H", "rttvar_upper")
SAMPLE_COLUMNS = ("packet_id", "rtt", "tick")

WITNESS_CHOICES = [m.value for m in WitnessMethod] + ["both", "all"]
PRESETS = ("pathological", "uniform")

E = TypeVar("E", bound=Enum)


def parse_choice(enum_cls: Type[E], value, label: str) -> E:
    """Convierte un nombre a miembro de Enum con un DomainError legible"""
    try:
        return enum_cls(value)
    except ValueError:
        available = [m.value for m in enum_cls]
        raise DomainError(f"Unknown {label} '{value}'. Available: {available}")


def resolve_methods(name: str) -> List[WitnessMethod]:
    if name == "both":
        return [WitnessMethod.CEILING, WitnessMethod.BINOMIAL_SEMI_AUTO]
    if name == "all":
        return list(WitnessMethod)
    return [parse_choice(WitnessMethod, name, "witness method")]


def resolve_params(
    config: ConfigManager,
    alpha: Optional[RationalLike] = None,
    beta: Optional[RationalLike] = None,
    g: Optional[RationalLike] = None,
    default_g: Optional[RationalLike] = None,
) -> RtoParams:
    """RtoParams con los valores explícitos y, en su defecto, los del archivo de configuración"""
    base = config.rto_params(default_g)
    return RtoParams(
        as_rational(alpha) if alpha is not None else base.alpha,
        as_rational(beta) if beta is not None else base.beta,
        as_rational(g) if g is not None else base.g,
    )


# -- witness -------------------------------------------------------------------


def cmd_witness(
    alpha: RationalLike,
    eps: RationalLike,
    method: str = "ceiling",
    verify_horizon: int = 10,
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> WitnessResponse:
    """
    Construye los testigos pedidos y verifica alpha**n < eps en n = delta+1 .. delta+verify_horizon

    Args:
        method: Un método, "both" (techo y binomial) o "all"
    """
    items = []
    for chosen in resolve_methods(method):
        result = witness(alpha, eps, chosen, cap)
        failures = result.failures(verify_horizon)
        items.append(
            WitnessItem(
                method=chosen.value,
                alpha=format_rational(result.alpha),
                epsilon=format_rational(result.epsilon),
                delta=result.delta,
                checks=verify_horizon,
                failures=failures,
                verified=not failures,
            )
        )
    return WitnessResponse(results=items, verified=all(item.verified for item in items))


# -- trace ---------------------------------------------------------------------


def read_samples(stream: IO[str]) -> List[Fraction]:
    """
    Lee muestras: un racional por línea o un CSV con columna "sample"

    Las líneas vacías y las que empiezan por "#" se ignoran.

    Raises:
        RationalParseError: Si alguna muestra no es un racional válido
        DomainError: Si no hay muestras
    """
    lines = [line.strip() for line in stream if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        raise DomainError("samples file contains no samples")
    try:
        parse_rational(lines[0])
    except RationalParseError:
        reader = csv.DictReader(lines)
        if not reader.fieldnames or "sample" not in reader.fieldnames:
            raise RationalParseError("samples CSV must have a 'sample' column")
        return [parse_rational(row["sample"]) for row in reader]
    return [parse_rational(line) for line in lines]


def load_samples(path: str) -> List[Fraction]:
    with open(path, "r", encoding="utf-8") as f:
        return read_samples(f)


def trace_rows(
    params: RtoParams,
    samples: Sequence[RationalLike],
    c: Optional[RationalLike] = None,
    r: Optional[RationalLike] = None,
    srtt_prior: Optional[RationalLike] = None,
    rttvar_prior: Optional[RationalLike] = None,
) -> Tuple[List[TraceRow], bool, List[str]]:
    """
    Filas de traza con cotas opcionales

    Con previos explícitos la ventana estacionaria es toda la secuencia; sin ellos
    empieza en el paso 2 y el estado del paso 1 hace de previo.

    Returns:
        (filas, cotas aplicadas, avisos)
    """
    samples = [as_rational(s) for s in samples]
    if not samples:
        raise DomainError("trace requires at least one sample")
    with_priors = srtt_prior is not None or rttvar_prior is not None
    if with_priors and (srtt_prior is None or rttvar_prior is None):
        raise DomainError("both srtt_prior and rttvar_prior are required")
    if (c is None) != (r is None):
        raise DomainError("bounds need both c and r")
    if with_priors and c is None:
        raise DomainError("priors only make sense together with c and r")

    if with_priors:
        states = run_from(params, prior_state(params, srtt_prior, rttvar_prior), samples)
    else:
        states = run(params, samples)
    rows = [
        TraceRow(index + 1, sample, state.srtt, state.rttvar, state.rto)
        for index, (sample, state) in enumerate(zip(samples, states))
    ]
    if c is None:
        return rows, False, []

    offset = 0 if with_priors else 1
    window = samples[offset:]
    if not window:
        message = "no steady-state window after the first sample; bounds omitted"
        logger.warning(message)
        return rows, False, [message]
    if not is_steady_state(window, c, r):
        message = "samples are not in the requested c/r steady state; bounds omitted"
        logger.warning(message)
        return rows, False, [message]

    if with_priors:
        spec = SteadySpec(c, r, params, srtt_prior, rttvar_prior)
    else:
        spec = SteadySpec(c, r, params, states[0].srtt, states[0].rttvar)
    bounded = rows[:offset]
    for n, row in enumerate(rows[offset:]):
        report = bound_report(spec, n, rule=DeltaRule.SOUND)
        bounded.append(
            TraceRow(row.step, row.sample, row.srtt, row.rttvar, row.rto, report.L, report.H, report.rttvar_upper)
        )
    return bounded, True, []


def trace_row_model(row: TraceRow) -> TraceRowModel:
    def text(value):
        return None if value is None else format_rational(value)

    return TraceRowModel(
        step=row.step,
        sample=format_rational(row.sample),
        srtt=format_rational(row.srtt),
        rttvar=format_rational(row.rttvar),
        rto=format_rational(row.rto),
        L=text(row.L),
        H=text(row.H),
        rttvar_upper=text(row.rttvar_upper),
        timeout=row.timeout,
    )


def cmd_trace(params: RtoParams, samples: Sequence[RationalLike], **bounds) -> TraceResponse:
    rows, applied, warnings = trace_rows(params, samples, **bounds)
    return TraceResponse(rows=[trace_row_model(row) for row in rows], bounds_applied=applied, warnings=warnings)


def trace_columns(with_bounds: bool = False, with_timeout: bool = False, decimal: Optional[int] = None) -> List[str]:
    columns = list(TRACE_COLUMNS)
    if with_bounds:
        columns += BOUND_COLUMNS
    if with_timeout:
        columns.append("timeout")
    if decimal is not None:
        columns += [f"{name}_dec" for name in columns if name in RATIONAL_COLUMNS]
    return columns


def write_trace_csv(
    rows: Iterable[TraceRow],
    stream: IO[str],
    with_bounds: bool = False,
    with_timeout: bool = False,
    decimal: Optional[int] = None,
):
    """Escribe la traza CSV (cabecera, comas, LF); los racionales como "p/q" exactos"""
    columns = trace_columns(with_bounds, with_timeout, decimal)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        values = []
        for name in columns:
            if name.endswith("_dec"):
                value = getattr(row, name[: -len("_dec")])
                values.append("" if value is None else to_decimal_string(value, decimal))
            elif name == "step":
                values.append(str(row.step))
            elif name == "timeout":
                values.append("" if row.timeout is None else str(row.timeout).lower())
            else:
                value = getattr(row, name)
                values.append("" if value is None else format_rational(value))
        writer.writerow(values)


# -- bounds --------------------------------------------------------------------


def cmd_bounds(
    params: RtoParams,
    c: RationalLike,
    r: RationalLike,
    srtt_prior: RationalLike,
    rttvar_prior: RationalLike,
    n: int = 0,
    m: int = 0,
    eps: Optional[RationalLike] = None,
    target: str = "L",
    method: str = "ceiling",
    rule: str = "sound",
    samples: Optional[Sequence[RationalLike]] = None,
) -> BoundsResponse:
    """
    Informe de cotas en n y, si se indica eps, el N de convergencia para target

    Raises:
        DomainError: Si m > 0 sin muestras, o las muestras no forman el estado estacionario
    """
    spec = SteadySpec(c, r, params, srtt_prior, rttvar_prior)
    delta_rule = parse_choice(DeltaRule, rule, "delta rule")
    trace = None
    if samples:
        if not is_steady_state(samples, c, r):
            raise DomainError("samples are not in the c/r steady state")
        trace = run_from(params, prior_state(params, spec.srtt_prior, spec.rttvar_prior), samples)
    report = bound_report(spec, n, m, trace, delta_rule)

    response = BoundsResponse(
        n=report.n,
        m=m,
        L=format_rational(report.L),
        H=format_rational(report.H),
        delta_m=format_rational(report.delta_m),
        rttvar_upper=format_rational(report.rttvar_upper),
        rule=delta_rule.value,
    )
    if eps is not None:
        goal = parse_choice(ConvergenceTarget, target, "convergence target")
        response.target = goal.value
        response.eps = format_rational(as_rational(eps))
        response.convergence_n = convergence_n_for(spec, goal, eps, parse_choice(WitnessMethod, method, "method"))
    return response


# -- scenario ------------------------------------------------------------------


def build_scenario(
    config: ConfigManager,
    preset: str,
    length: Optional[int] = None,
    seed: Optional[int] = None,
    alpha: Optional[RationalLike] = None,
    beta: Optional[RationalLike] = None,
    g: Optional[RationalLike] = None,
) -> ScenarioSpec:
    """
    Escenario a partir del preset y de los valores del archivo de configuración

    El preset uniforme usa su propia G por defecto (uniform.g).
    """
    if preset not in PRESETS:
        raise DomainError(f"Unknown preset '{preset}'. Available presets: {list(PRESETS)}")
    section = config.get(preset, {})
    if preset == "pathological":
        kind = config.pathological()
        params = resolve_params(config, alpha, beta, g)
    else:
        kind = config.uniform(seed)
        params = resolve_params(config, alpha, beta, g, default_g=section.get("g"))
    return ScenarioSpec(kind, length if length is not None else int(section.get("length", 1000)), params)


def timeout_summary(report: TimeoutReport) -> TimeoutSummary:
    return TimeoutSummary(count=report.count, steps=report.timeout_steps, spike_steps=report.spike_steps)


def cmd_scenario(spec: ScenarioSpec, preset: str, include_trace: bool = False) -> Tuple[ScenarioResponse, TimeoutReport]:
    report = run_scenario(spec)
    response = ScenarioResponse(
        preset=preset,
        length=spec.length,
        summary=timeout_summary(report),
        trace=[trace_row_model(row) for row in report.trace] if include_trace else None,
    )
    return response, report


# -- simulate ------------------------------------------------------------------


def sim_trace_rows(report: SimReport) -> List[TraceRow]:
    return [
        TraceRow(state.step, Fraction(sample.rtt), state.srtt, state.rttvar, state.rto)
        for sample, state in zip(report.samples, report.trace)
    ]


def sim_report_model(report: SimReport) -> SimReportModel:
    return SimReportModel(
        samples=[SampleModel(packet_id=s.packet_id, rtt=s.rtt, tick=s.tick) for s in report.samples],
        trace=[trace_row_model(row) for row in sim_trace_rows(report)],
        invariant_log=[InvariantModel(**entry.to_dict()) for entry in report.invariant_log],
        ambiguities=[
            AmbiguityModel(tick=a.tick, ack=a.ack, packet_id=a.packet_id, candidate_rtts=list(a.candidate_rtts))
            for a in report.ambiguities
        ],
        counters=asdict(report.counters),
        completed=report.completed,
        ticks=report.ticks,
        final_rto=format_rational(report.final_state.rto) if report.final_state else None,
    )


def cmd_simulate(
    channel: ChannelConfig,
    n_packets: int,
    params: RtoParams,
    window: int = 1,
    max_ticks: Optional[int] = None,
    replay_name: Optional[str] = None,
) -> SimReport:
    """Simula sobre el canal aleatorio o, con replay_name, reproduce un guion"""
    if replay_name is not None:
        return replay(replay_name, params)
    policy = PolicyFactory().create("window", window=window)
    options = {} if max_ticks is None else {"max_ticks": max_ticks}
    return run_simulation(channel, n_packets, params, policy, window=window, **options)


def write_samples_csv(report: SimReport, stream: IO[str]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SAMPLE_COLUMNS)
    for sample in report.samples:
        writer.writerow([sample.packet_id, sample.rtt, sample.tick])


def simulation_failed(report: SimReport, replay_name: Optional[str]) -> bool:
    """Fallo si hay violaciones o si el guion ambiguo llegó a muestrear el paquete 2"""
    if not report.ok:
        return True
    if replay_name is None:
        return False
    return resolve_replay(replay_name) == "ambiguous-ack" and bool(report.samples_for(2))


# -- argparse ------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except RationalParseError as e:
        raise argparse.ArgumentTypeError(str(e))


def _natural(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return value


def _seed(text: str) -> int:
    value = _natural(text)
    if value >= 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a probability, got {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return value


def _add_params(parser: argparse.ArgumentParser):
    parser.add_argument("--alpha", type=_rational, help="ganancia de srtt (por defecto 1/8)")
    parser.add_argument("--beta", type=_rational, help="ganancia de rttvar (por defecto 1/4)")
    parser.add_argument("--g", type=_rational, help="granularidad G")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rto-forge", description="Exact RFC 6298 RTO toolkit")
    parser.add_argument("--config", help="archivo de configuración (JSON o YAML)")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="nivel de log")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("witness", help="testigo delta de alpha**n -> 0")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--method", choices=WITNESS_CHOICES, default="ceiling")
    p.add_argument("--verify", type=_natural, dest="verify_horizon", help="n a comprobar tras delta")
    p.add_argument("--cap", type=_natural, default=DEFAULT_BRUTE_FORCE_CAP, help="límite de brute-force")

    p = sub.add_parser("trace", help="traza srtt/rttvar/rto de un archivo de muestras")
    p.add_argument("samples_file")
    _add_params(p)
    p.add_argument("--c", type=_rational)
    p.add_argument("--r", type=_rational)
    p.add_argument("--srtt-prior", type=_rational)
    p.add_argument("--rttvar-prior", type=_rational)
    p.add_argument("--out")
    p.add_argument("--decimal", type=_natural)

    p = sub.add_parser("bounds", help="cotas del estado estacionario y N de convergencia")
    _add_params(p)
    p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--r", type=_rational, required=True)
    p.add_argument("--srtt-prior", type=_rational, required=True)
    p.add_argument("--rttvar-prior", type=_rational, required=True)
    p.add_argument("--n", type=_natural, default=0)
    p.add_argument("--m", type=_natural, default=0)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--target", choices=[t.value for t in ConvergenceTarget], default="L")
    p.add_argument("--method", choices=[m.value for m in WitnessMethod], default="ceiling")
    p.add_argument("--rule", choices=[r.value for r in DeltaRule], default="sound")
    p.add_argument("--samples", help="muestras S_i.. necesarias cuando m > 0")

    p = sub.add_parser("scenario", help="escenarios patológico y uniforme")
    p.add_argument("--preset", choices=PRESETS, required=True)
    p.add_argument("--length", type=_natural)
    p.add_argument("--seed", type=_seed)
    _add_params(p)
    p.add_argument("--out")
    p.add_argument("--report", help="ruta del JSON de timeouts (stderr por defecto)")
    p.add_argument("--decimal", type=_natural)

    p = sub.add_parser("simulate", help="simulador de eventos discretos con muestreo de Karn")
    p.add_argument("--drop", type=_probability)
    p.add_argument("--dup", type=_probability)
    p.add_argument("--delay", type=_natural, help="retardo constante (min = max)")
    p.add_argument("--min-delay", type=_natural)
    p.add_argument("--max-delay", type=_natural)
    p.add_argument("--fifo-acks", action="store_true", default=None)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--n-packets", type=_natural, default=10)
    p.add_argument("--window", type=_natural)
    p.add_argument("--max-ticks", type=_natural)
    p.add_argument("--replay", choices=available_replays())
    _add_params(p)
    p.add_argument("--out", help="directorio para samples.csv, trace.csv e invariants.json")
    return parser


def _open_out(path: Optional[str]):
    if path is None:
        return None
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="")


def _emit_csv(path: Optional[str], write):
    handle = _open_out(path)
    if handle is None:
        write(sys.stdout)
        return
    with handle:
        write(handle)


def _run_witness(args, config: ConfigManager) -> int:
    horizon = args.verify_horizon if args.verify_horizon is not None else int(config.get("verify_horizon", 10))
    response = cmd_witness(args.alpha, args.eps, args.method, horizon, args.cap)
    print(response.model_dump_json(indent=2))
    return EXIT_OK if response.verified else EXIT_FAILURE


def _run_trace(args, config: ConfigManager) -> int:
    params = resolve_params(config, args.alpha, args.beta, args.g)
    rows, applied, warnings = trace_rows(
        params,
        load_samples(args.samples_file),
        c=args.c,
        r=args.r,
        srtt_prior=args.srtt_prior,
        rttvar_prior=args.rttvar_prior,
    )
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)
    _emit_csv(args.out, lambda f: write_trace_csv(rows, f, with_bounds=applied, decimal=args.decimal))
    return EXIT_OK


def _run_bounds(args, config: ConfigManager) -> int:
    params = resolve_params(config, args.alpha, args.beta, args.g)
    response = cmd_bounds(
        params,
        args.c,
        args.r,
        args.srtt_prior,
        args.rttvar_prior,
        n=args.n,
        m=args.m,
        eps=args.eps,
        target=args.target,
        method=args.method,
        rule=args.rule,
        samples=load_samples(args.samples) if args.samples else None,
    )
    print(response.model_dump_json(indent=2, exclude_none=True))
    return EXIT_OK


def _run_scenario(args, config: ConfigManager) -> int:
    spec = build_scenario(config, args.preset, args.length, args.seed, args.alpha, args.beta, args.g)
    response, report = cmd_scenario(spec, args.preset)
    _emit_csv(args.out, lambda f: write_trace_csv(report.trace, f, with_timeout=True, decimal=args.decimal))
    summary = json.dumps(response.summary.model_dump(), indent=2)
    if args.report:
        with _open_out(args.report) as f:
            f.write(summary + "\n")
    else:
        print(summary, file=sys.stderr)
    return EXIT_OK


def _run_simulate(args, config: ConfigManager) -> int:
    section = config.get("channel", {})
    min_delay = args.delay if args.delay is not None else args.min_delay
    max_delay = args.delay if args.delay is not None else args.max_delay
    channel = config.channel_config(
        drop_prob=args.drop,
        dup_prob=args.dup,
        min_delay=min_delay,
        max_delay=max_delay,
        fifo_acks=args.fifo_acks,
        seed=args.seed,
    )
    params = resolve_params(config, args.alpha, args.beta, args.g)
    window = args.window if args.window is not None else int(section.get("window", 1))
    max_ticks = args.max_ticks if args.max_ticks is not None else section.get("max_ticks")
    report = cmd_simulate(channel, args.n_packets, params, window, max_ticks, args.replay)

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "samples.csv"), "w", encoding="utf-8", newline="") as f:
            write_samples_csv(report, f)
        with open(os.path.join(args.out, "trace.csv"), "w", encoding="utf-8", newline="") as f:
            write_trace_csv(sim_trace_rows(report), f)
        with open(os.path.join(args.out, "invariants.json"), "w", encoding="utf-8") as f:
            json.dump([entry.to_dict() for entry in report.invariant_log], f, indent=2)
    print(sim_report_model(report).model_dump_json(indent=2))
    return EXIT_FAILURE if simulation_failed(report, args.replay) else EXIT_OK


COMMANDS = {
    "witness": _run_witness,
    "trace": _run_trace,
    "bounds": _run_bounds,
    "scenario": _run_scenario,
    "simulate": _run_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Punto de entrada; devuelve el código de salida"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    settings = get_settings()
    configure_logging(args.log_level or settings.log_level)
    try:
        config = ConfigManager(args.config or settings.config_file)
        return COMMANDS[args.command](args, config)
    except (DomainError, ConfigError, ValidationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
