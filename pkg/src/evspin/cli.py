"""Command-line front end: quorum reports, trajectory runs, reconstruction, spectra.

The CLI does no arithmetic of its own; every emitted number comes from a
library call and is formatted at full double precision, so identical
configurations produce byte-identical output files.

Configuration is one JSON document.  Exit status: 0 on success, 2 for
configuration errors, 3 for numerical failures (singular quorum,
convergence).
"""

import argparse
import hashlib
import json
import sys

import numpy as np

from .dynamics import (
    build_driven_generator,
    build_generator,
    generator_eigenvalues,
    propagate_grid,
)
from .errors import (
    ConvergenceFailureError,
    InvariantViolationError,
    OverflowRiskError,
    SingularMatrixError,
    SingularQuorumError,
)
from .quorum import QuorumConfig, build_quorum, default_config, gram_condition
from .representation import PVector, pvec_to_rho, rho_to_pvec
from .spin import (
    Direction,
    Drive,
    Envelope,
    HamiltonianSpec,
    Spin,
    basis_state,
    build_hamiltonian,
    coherent_state,
    maximally_mixed,
    pure_state_density,
    random_pure_state,
    spin_operators,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (
    SingularQuorumError,
    SingularMatrixError,
    ConvergenceFailureError,
    InvariantViolationError,
    OverflowRiskError,
)


class ConfigError(Exception):
    """Malformed or contradictory run configuration."""


def _fmt(x):
    return format(float(x), ".17e")


def _config_hash(cfg):
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return cfg


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{field}' must be a number")
    return float(value)


def _number_list(value, field, length=None):
    if not isinstance(value, list):
        raise ConfigError(f"field '{field}' must be a list of numbers")
    out = [_number(v, f"{field}[{i}]") for i, v in enumerate(value)]
    if length is not None and len(out) != length:
        raise ConfigError(f"field '{field}' must have length {length}, got {len(out)}")
    return out


def _parse_spin(cfg):
    if "two_s" not in cfg:
        raise ConfigError("missing field 'two_s'")
    two_s = cfg["two_s"]
    if isinstance(two_s, bool) or not isinstance(two_s, int) or two_s < 0:
        raise ConfigError("field 'two_s' must be a non-negative integer")
    return Spin(two_s)


def _parse_quorum_config(cfg, spin):
    block = cfg.get("quorum")
    if block is None:
        return default_config(spin)
    if not isinstance(block, dict):
        raise ConfigError("field 'quorum' must be an object")
    base = default_config(spin)
    cones = block.get("cone_angles", list(base.cone_angles))
    offsets = block.get("azimuth_offsets", list(base.azimuth_offsets))
    try:
        return QuorumConfig(spin,
                            tuple(_number_list(cones, "quorum.cone_angles")),
                            tuple(_number_list(offsets, "quorum.azimuth_offsets")))
    except ValueError as exc:
        raise ConfigError(f"field 'quorum': {exc}") from exc


def _parse_envelope(block):
    if not isinstance(block, dict):
        raise ConfigError("field 'hamiltonian.drive.envelope' must be an object")
    shape = block.get("shape", "constant")
    try:
        return Envelope(
            shape=shape,
            amplitude=_number(block.get("amplitude", 1.0), "envelope.amplitude"),
            frequency=_number(block.get("frequency", 0.0), "envelope.frequency"),
            phase=_number(block.get("phase", 0.0), "envelope.phase"),
            breakpoints=tuple(_number_list(block.get("breakpoints", []), "envelope.breakpoints")),
            values=tuple(_number_list(block.get("values", []), "envelope.values")),
        )
    except ValueError as exc:
        raise ConfigError(f"field 'hamiltonian.drive.envelope': {exc}") from exc


def _parse_hamiltonian(cfg):
    block = cfg.get("hamiltonian")
    if block is None:
        raise ConfigError("missing field 'hamiltonian'")
    if not isinstance(block, dict):
        raise ConfigError("field 'hamiltonian' must be an object")

    def static_part(b, prefix):
        linear = _number_list(b.get("linear", [0.0, 0.0, 0.0]), f"{prefix}.linear", 3)
        quadratic = b.get("quadratic")
        if quadratic is not None:
            if not isinstance(quadratic, list) or len(quadratic) != 3:
                raise ConfigError(f"field '{prefix}.quadratic' must be a 3x3 matrix")
            quadratic = [_number_list(row, f"{prefix}.quadratic[{i}]", 3)
                         for i, row in enumerate(quadratic)]
        return linear, quadratic

    linear, quadratic = static_part(block, "hamiltonian")
    drive = None
    if block.get("drive") is not None:
        dblock = block["drive"]
        if not isinstance(dblock, dict):
            raise ConfigError("field 'hamiltonian.drive' must be an object")
        dlin, dquad = static_part(dblock, "hamiltonian.drive")
        envelope = _parse_envelope(dblock.get("envelope", {}))
        drive = Drive(HamiltonianSpec(linear=tuple(dlin), quadratic=dquad), envelope)
    try:
        return HamiltonianSpec(linear=tuple(linear), quadratic=quadratic, drive=drive)
    except ValueError as exc:
        raise ConfigError(f"field 'hamiltonian': {exc}") from exc


_STATE_VARIANTS = ("coherent", "basis", "maximally_mixed", "density_matrix",
                   "pvector", "random_pure")


def _parse_initial_state(cfg, spin, ops, quorum):
    """Returns (p0, rho0); rho0 is None when the input was a bare P vector."""
    block = cfg.get("initial_state")
    if not isinstance(block, dict):
        raise ConfigError("missing or malformed field 'initial_state'")
    present = [k for k in block if k in _STATE_VARIANTS]
    unknown = [k for k in block if k not in _STATE_VARIANTS]
    if unknown:
        raise ConfigError(f"unknown initial_state variant(s): {', '.join(sorted(unknown))}")
    if len(present) != 1:
        raise ConfigError(
            f"exactly one initial_state variant required, got {len(present)} "
            f"of {_STATE_VARIANTS}")
    kind = present[0]
    spec = block[kind]

    if kind == "coherent":
        if not isinstance(spec, dict):
            raise ConfigError("initial_state.coherent must be an object with theta, phi")
        try:
            direction = Direction(_number(spec.get("theta"), "coherent.theta"),
                                  _number(spec.get("phi", 0.0), "coherent.phi"))
        except ValueError as exc:
            raise ConfigError(f"initial_state.coherent: {exc}") from exc
        rho0 = pure_state_density(coherent_state(spin, direction, ops).amplitudes)
    elif kind == "basis":
        if not isinstance(spec, dict) or "mu" not in spec:
            raise ConfigError("initial_state.basis must be an object with field 'mu'")
        try:
            rho0 = pure_state_density(basis_state(spin, _number(spec["mu"], "basis.mu")))
        except ValueError as exc:
            raise ConfigError(f"initial_state.basis: {exc}") from exc
    elif kind == "maximally_mixed":
        rho0 = maximally_mixed(spin.dim)
    elif kind == "density_matrix":
        if not isinstance(spec, dict) or "real" not in spec:
            raise ConfigError("initial_state.density_matrix needs field 'real' (and optional 'imag')")
        real = np.array([_number_list(row, "density_matrix.real", spin.dim)
                         for row in spec["real"]])
        if real.shape != (spin.dim, spin.dim):
            raise ConfigError(f"density_matrix.real must be {spin.dim}x{spin.dim}")
        imag = np.zeros_like(real)
        if "imag" in spec:
            imag = np.array([_number_list(row, "density_matrix.imag", spin.dim)
                             for row in spec["imag"]])
            if imag.shape != (spin.dim, spin.dim):
                raise ConfigError(f"density_matrix.imag must be {spin.dim}x{spin.dim}")
        rho0 = real + 1j * imag
    elif kind == "pvector":
        values = _number_list(spec, "initial_state.pvector", quorum.size)
        return PVector(np.asarray(values), quorum), None
    else:  # random_pure
        if not isinstance(spec, dict) or "seed" not in spec:
            raise ConfigError("initial_state.random_pure requires an explicit 'seed'")
        seed = spec["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigError("initial_state.random_pure.seed must be an integer")
        rho0 = pure_state_density(random_pure_state(spin.dim, np.random.default_rng(seed)))

    return rho_to_pvec(rho0, quorum), rho0


def _parse_times(cfg):
    block = cfg.get("time_grid")
    if not isinstance(block, dict):
        raise ConfigError("missing or malformed field 'time_grid'")
    t_start = _number(block.get("t_start", 0.0), "time_grid.t_start")
    if "t_end" not in block:
        raise ConfigError("missing field 'time_grid.t_end'")
    t_end = _number(block["t_end"], "time_grid.t_end")
    steps = block.get("steps")
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise ConfigError("field 'time_grid.steps' must be an integer >= 1")
    if not t_end > t_start:
        raise ConfigError("time_grid requires t_end > t_start")
    return np.linspace(t_start, t_end, steps + 1)


def _parse_method(cfg):
    method = cfg.get("method", "exact-expm")
    if method not in ("exact-expm", "rk4"):
        raise ConfigError("field 'method' must be 'exact-expm' or 'rk4'")
    substeps = cfg.get("substeps", 10)
    if isinstance(substeps, bool) or not isinstance(substeps, int) or substeps < 1:
        raise ConfigError("field 'substeps' must be an integer >= 1")
    return method, substeps


def _output_path(cfg, args, key):
    if args.out is not None:
        return args.out
    block = cfg.get("output", {})
    if isinstance(block, dict):
        path = block.get(key)
        if path is not None and not isinstance(path, str):
            raise ConfigError(f"field 'output.{key}' must be a path string")
        return path
    return None


def _resolve_format(cfg, args):
    fmt = args.format
    if fmt is None:
        block = cfg.get("output", {})
        fmt = block.get("format", "csv") if isinstance(block, dict) else "csv"
    if fmt not in ("csv", "json-lines"):
        raise ConfigError("output format must be 'csv' or 'json-lines'")
    return fmt


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv_document(meta, header, rows):
    lines = [f"# {key} = {value}" for key, value in meta]
    lines.append(",".join(header))
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _jsonl_document(meta, records):
    lines = [json.dumps({"meta": dict(meta)}, sort_keys=True)]
    lines.extend(json.dumps(rec, sort_keys=True) for rec in records)
    return "\n".join(lines) + "\n"


def cmd_quorum(args):
    cfg = _load_config(args.config)
    spin = _parse_spin(cfg)
    qconfig = _parse_quorum_config(cfg, spin)
    quorum = build_quorum(qconfig)
    min_eig, condition = gram_condition(quorum)
    fmt = _resolve_format(cfg, args)

    meta = [
        ("config_hash", _config_hash(cfg)),
        ("two_s", spin.two_s),
        ("n_points", quorum.size),
        ("condition_number", _fmt(condition)),
        ("min_gram_eigenvalue", _fmt(min_eig)),
        ("duality_residual", _fmt(quorum.duality_residual)),
        ("identity_expansion_residual", _fmt(quorum.identity_residual)),
    ]
    angles = [("cone_angles", [float(t) for t in qconfig.cone_angles]),
              ("azimuth_offsets", [float(p) for p in qconfig.azimuth_offsets])]
    if fmt == "csv":
        rows = []
        for n, direction in enumerate(quorum.directions):
            rows.append([str(n), str(n // spin.dim), str(n % spin.dim),
                         _fmt(direction.theta), _fmt(direction.phi)])
        text = _csv_document(meta + [(k, json.dumps(v)) for k, v in angles],
                             ["n", "cone", "azimuth", "theta", "phi"], rows)
    else:
        records = [{"n": n, "cone": n // spin.dim, "azimuth": n % spin.dim,
                    "theta": d.theta, "phi": d.phi}
                   for n, d in enumerate(quorum.directions)]
        text = _jsonl_document(meta + angles, records)
    _write_text(args.out, text)
    return EXIT_OK


def _spectrum_pairs(values):
    return [[float(z.real), float(z.imag)] for z in values]


def cmd_spectrum(args):
    cfg = _load_config(args.config)
    spin = _parse_spin(cfg)
    ops = spin_operators(spin)
    quorum = build_quorum(_parse_quorum_config(cfg, spin))
    spec = _parse_hamiltonian(cfg)
    hmat = build_hamiltonian(spec, ops)
    gen = build_generator(hmat, quorum)
    fmt = _resolve_format(cfg, args)

    meta = [("config_hash", _config_hash(cfg)),
            ("two_s", spin.two_s),
            ("n_points", quorum.size)]
    if spec.drive is not None:
        meta.append(("note", "spectra refer to the static part; the drive term is excluded"))
    h_eigs = gen.h_eigenvalues
    m_eigs = generator_eigenvalues(gen)
    if fmt == "csv":
        rows = [["H", str(i), _fmt(e), _fmt(0.0)] for i, e in enumerate(h_eigs)]
        rows += [["M", str(i), _fmt(z.real), _fmt(z.imag)] for i, z in enumerate(m_eigs)]
        text = _csv_document(meta, ["matrix", "index", "real", "imag"], rows)
    else:
        records = [{"matrix": "H", "index": i, "real": float(e), "imag": 0.0}
                   for i, e in enumerate(h_eigs)]
        records += [{"matrix": "M", "index": i, "real": float(z.real), "imag": float(z.imag)}
                    for i, z in enumerate(m_eigs)]
        text = _jsonl_document(meta, records)
    _write_text(args.out, text)
    return EXIT_OK


def cmd_reconstruct(args):
    cfg = _load_config(args.config)
    spin = _parse_spin(cfg)
    ops = spin_operators(spin)
    quorum = build_quorum(_parse_quorum_config(cfg, spin))
    p0, rho0 = _parse_initial_state(cfg, spin, ops, quorum)
    fmt = _resolve_format(cfg, args)

    meta = [("config_hash", _config_hash(cfg)),
            ("two_s", spin.two_s),
            ("n_points", quorum.size)]
    if rho0 is not None:
        meta.append(("direction", "state_to_probabilities"))
        meta.append(("e_dot_p", _fmt(p0.normalization)))
        if fmt == "csv":
            rows = [[str(n), _fmt(v)] for n, v in enumerate(p0.values)]
            text = _csv_document(meta, ["n", "P_n"], rows)
        else:
            records = [{"n": n, "P": float(v)} for n, v in enumerate(p0.values)]
            text = _jsonl_document(meta, records)
    else:
        rho, report = pvec_to_rho(p0)
        meta.append(("direction", "probabilities_to_state"))
        meta.append(("trace", _fmt(report.trace)))
        meta.append(("min_eigenvalue", _fmt(report.min_eigenvalue)))
        meta.append(("e_dot_p", _fmt(report.e_dot_p)))
        meta.append(("physical", "true" if report.physical else "false"))
        if not report.physical:
            print("warning: input probabilities do not correspond to a physical state "
                  f"(trace {report.trace:.6e}, min eigenvalue {report.min_eigenvalue:.6e})",
                  file=sys.stderr)
        if fmt == "csv":
            rows = [[str(i), str(j), _fmt(rho[i, j].real), _fmt(rho[i, j].imag)]
                    for i in range(spin.dim) for j in range(spin.dim)]
            text = _csv_document(meta, ["row", "col", "real", "imag"], rows)
        else:
            records = [{"row": i, "col": j,
                        "real": float(rho[i, j].real), "imag": float(rho[i, j].imag)}
                       for i in range(spin.dim) for j in range(spin.dim)]
            text = _jsonl_document(meta, records)
    _write_text(args.out, text)
    return EXIT_OK


def cmd_evolve(args):
    cfg = _load_config(args.config)
    spin = _parse_spin(cfg)
    ops = spin_operators(spin)
    quorum = build_quorum(_parse_quorum_config(cfg, spin))
    spec = _parse_hamiltonian(cfg)
    times = _parse_times(cfg)
    method, substeps = _parse_method(cfg)
    p0, rho0 = _parse_initial_state(cfg, spin, ops, quorum)
    fmt = _resolve_format(cfg, args)

    driven = spec.drive is not None
    if driven:
        gen = build_driven_generator(spec, ops, quorum)
        static_gen = gen.static
    else:
        gen = build_generator(build_hamiltonian(spec, ops), quorum)
        static_gen = gen

    oracle = None
    if args.oracle:
        if driven:
            raise ConfigError("--oracle requires an autonomous Hamiltonian (no drive)")
        if rho0 is None:
            rho0, _ = pvec_to_rho(p0)
        oracle = rho0

    trajectory = propagate_grid(gen, p0, times, method=method,
                                substeps=substeps, oracle=oracle)

    config_hash = _config_hash(cfg)
    meta = [("config_hash", config_hash),
            ("two_s", spin.two_s),
            ("n_points", quorum.size)]
    header = (["t"] + [f"P_{n + 1}" for n in range(quorum.size)]
              + ["ePdot", "minP", "maxP", "sumP"])
    if oracle is not None:
        header.append("oracle_dev")
    if fmt == "csv":
        rows = []
        for i, t in enumerate(trajectory.times):
            row = [_fmt(t)] + [_fmt(v) for v in trajectory.values[i]]
            row += [_fmt(trajectory.e_dot_p[i]), _fmt(trajectory.p_min[i]),
                    _fmt(trajectory.p_max[i]), _fmt(trajectory.p_sum[i])]
            if oracle is not None:
                row.append(_fmt(trajectory.oracle_dev[i]))
            rows.append(row)
        text = _csv_document(meta, header, rows)
    else:
        records = []
        for i, t in enumerate(trajectory.times):
            rec = {"t": float(t), "P": [float(v) for v in trajectory.values[i]],
                   "ePdot": float(trajectory.e_dot_p[i]),
                   "minP": float(trajectory.p_min[i]),
                   "maxP": float(trajectory.p_max[i]),
                   "sumP": float(trajectory.p_sum[i])}
            if oracle is not None:
                rec["oracle_dev"] = float(trajectory.oracle_dev[i])
            records.append(rec)
        text = _jsonl_document(meta, records)

    out_path = _output_path(cfg, args, "trajectory")
    _write_text(out_path, text)

    summary = {
        "config_hash": config_hash,
        "inputs": cfg,
        "two_s": spin.two_s,
        "n_points": quorum.size,
        "method": method,
        "substeps": substeps if method == "rk4" else None,
        "driven": driven,
        "quorum": {
            "condition_number": quorum.condition_number,
            "min_gram_eigenvalue": quorum.min_gram_eigenvalue,
            "duality_residual": quorum.duality_residual,
            "identity_expansion_residual": quorum.identity_residual,
        },
        "generator": {
            "imag_residue": static_gen.imag_residue,
            "cross_check_deviation": static_gen.cross_check_deviation,
            "conservation_residual": static_gen.conservation_residual,
            "bohr_deviation": static_gen.bohr_deviation,
        },
        "spectrum_h": [float(e) for e in static_gen.h_eigenvalues],
        "spectrum_m": _spectrum_pairs(generator_eigenvalues(static_gen)),
        "normalization": {
            "initial": float(trajectory.e_dot_p[0]),
            "max_drift": trajectory.normalization_drift,
        },
        "bounds": {
            "min_p": float(trajectory.p_min.min()),
            "max_p": float(trajectory.p_max.max()),
        },
        "oracle_max_deviation": (float(np.max(trajectory.oracle_dev))
                                 if oracle is not None else None),
    }
    block = cfg.get("output", {})
    summary_cfg = block.get("summary") if isinstance(block, dict) else None
    if summary_cfg is not None and not isinstance(summary_cfg, str):
        raise ConfigError("field 'output.summary' must be a path string")
    if args.out is None and summary_cfg is not None:
        summary_path = summary_cfg
    elif out_path is not None:
        summary_path = out_path + ".summary.json"
    else:
        summary_path = None
    _write_text(summary_path, json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="evspin",
        description="Spin-s dynamics on coherent-state probabilities: build "
                    "direction quorums, evolve probability vectors, reconstruct "
                    "states, inspect spectra.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, helptext in (
            ("quorum", cmd_quorum, "report directions, Gram conditioning, duality residuals"),
            ("evolve", cmd_evolve, "propagate a probability vector over a time grid"),
            ("reconstruct", cmd_reconstruct, "convert between states and probability vectors"),
            ("spectrum", cmd_spectrum, "print eigenvalues of the Hamiltonian and the flow generator")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="path to the JSON run configuration")
        p.add_argument("--out", default=None, help="output path (default: stdout or config 'output')")
        p.add_argument("--format", choices=("csv", "json-lines"), default=None,
                       help="output format (default: csv or config 'output.format')")
        if name == "evolve":
            p.add_argument("--oracle", action="store_true",
                           help="add a column comparing against direct density-matrix propagation")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, TypeError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
