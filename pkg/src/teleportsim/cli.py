"""Command-line front end.

Subcommands: ``teleport`` (ideal-protocol shot runs), ``deviation``
(single-point report), ``sweep`` (deterministic CSV over the overlap range),
``paper-check`` (canonical vs printed reduced state, side by side).

Exit codes: 0 success, 2 usage/validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields

import numpy as np

from .envmodel import (
    EnvironmentModel,
    deviation,
    deviation_closed_form_paper,
    reduced_state,
    reduced_state_paper_literal,
)
from .qcore import Ket, fidelity, ket_from_amplitudes, purity, seeded_stream, to_density
from .teleport import enumerate_branches

__all__ = ["SweepConfig", "load_config", "main", "CSV_FIELDS"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

INV_SQRT2 = 0.7071067811865476

CSV_FIELDS = (
    "gamma_re",
    "gamma_im",
    "c0_re",
    "c0_im",
    "c1_re",
    "c1_im",
    "a_re",
    "a_im",
    "b_re",
    "b_im",
    "delta_canonical",
    "delta_paper",
    "fidelity",
    "purity",
)


class UsageError(Exception):
    """Bad flags or config values; maps to exit code 2."""


@dataclass
class SweepConfig:
    """One sweep run: state and coupling coefficients, overlap range, output."""

    a_re: float = INV_SQRT2
    a_im: float = 0.0
    b_re: float = INV_SQRT2
    b_im: float = 0.0
    c0_re: float = INV_SQRT2
    c0_im: float = 0.0
    c1_re: float = INV_SQRT2
    c1_im: float = 0.0
    gamma_start: float = 0.0
    gamma_end: float = 1.0
    steps: int = 101
    gamma_phase: float = 0.0
    seed: int = 0
    output_path: str = "sweep.csv"

    @property
    def a(self) -> complex:
        return complex(self.a_re, self.a_im)

    @property
    def b(self) -> complex:
        return complex(self.b_re, self.b_im)

    @property
    def c0(self) -> complex:
        return complex(self.c0_re, self.c0_im)

    @property
    def c1(self) -> complex:
        return complex(self.c1_re, self.c1_im)

    def validate(self) -> None:
        """Check ranges and normalize (a, b) in place."""
        for f in fields(self):
            if f.type == "float" and not np.isfinite(getattr(self, f.name)):
                raise UsageError(f"{f.name} is not finite")
        if self.steps < 2:
            raise UsageError(f"steps must be >= 2, got {self.steps}")
        for name in ("gamma_start", "gamma_end"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise UsageError(f"{name} must lie in [0, 1], got {value}")
        if not 0 <= self.seed < 2**64:
            raise UsageError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        norm = np.sqrt(abs(self.a) ** 2 + abs(self.b) ** 2)
        if norm == 0.0:
            raise UsageError("amplitudes (0, 0) do not define a state")
        self.a_re, self.a_im = self.a_re / norm, self.a_im / norm
        self.b_re, self.b_im = self.b_re / norm, self.b_im / norm
        if self.c0 == 0 and self.c1 == 0:
            raise UsageError("c0 and c1 cannot both be zero")


_CONFIG_INT_KEYS = frozenset({"steps", "seed"})
_CONFIG_STR_KEYS = frozenset({"output_path"})
_CONFIG_KEYS = frozenset(f.name for f in fields(SweepConfig))


def load_config(path: str) -> SweepConfig:
    """Parse a line-oriented ``key = value`` config file.

    Keys are the SweepConfig field names; ``#`` starts a comment; blank lines
    are ignored; unknown keys and malformed numbers are hard errors naming the
    line. Command-line flags override the loaded values.
    """
    cfg = SweepConfig()
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not sep or not key:
                raise UsageError(f"expected 'key = value' (line {lineno})")
            if key not in _CONFIG_KEYS:
                raise UsageError(f"unknown key '{key}' (line {lineno})")
            if key in _CONFIG_STR_KEYS:
                parsed: object = value
            elif key in _CONFIG_INT_KEYS:
                try:
                    parsed = int(value)
                except ValueError:
                    raise UsageError(
                        f"malformed number for '{key}' (line {lineno}): {value!r}"
                    ) from None
            else:
                try:
                    parsed = float(value)
                except ValueError:
                    raise UsageError(
                        f"malformed number for '{key}' (line {lineno}): {value!r}"
                    ) from None
            setattr(cfg, key, parsed)
    return cfg


def _state_from_args(args) -> Ket:
    a = complex(args.a_re, args.a_im)
    b = complex(args.b_re, args.b_im)
    if not all(np.isfinite(v) for v in (args.a_re, args.a_im, args.b_re, args.b_im)):
        raise UsageError("amplitudes must be finite")
    if a == 0 and b == 0:
        raise UsageError("amplitudes (0, 0) do not define a state")
    return ket_from_amplitudes(a, b)


def _env_from_args(args) -> EnvironmentModel:
    gamma = args.gamma * np.exp(1j * args.gamma_phase)
    if abs(gamma) > 1.0 + 1e-12:
        raise UsageError(f"|gamma| = {abs(gamma)} exceeds 1")
    c0 = complex(args.c0_re, args.c0_im)
    c1 = complex(args.c1_re, args.c1_im)
    if c0 == 0 and c1 == 0:
        raise UsageError("c0 and c1 cannot both be zero")
    try:
        return EnvironmentModel(complex(gamma), c0, c1)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"

def _fmt_matrix(mat: np.ndarray) -> str:
    return "\n".join(
        "  [ " + "  ".join(_fmt_complex(z) for z in row) + " ]" for row in mat
    )


def cmd_teleport(args) -> int:
    if args.shots < 1:
        raise UsageError(f"shots must be >= 1, got {args.shots}")
    if args.seed < 0:
        raise UsageError(f"seed must be non-negative, got {args.seed}")
    psi = _state_from_args(args)
    # The four branches are fixed by the input state, so sample the branch
    # index per shot instead of re-running the whole protocol each time.
    records = enumerate_branches(psi)
    probabilities = np.array([r.probability for r in records])
    draws = seeded_stream(args.seed).random(args.shots) * probabilities.sum()
    indices = np.searchsorted(np.cumsum(probabilities), draws, side="right")
    counts = np.bincount(np.minimum(indices, 3), minlength=4)
    for record, count in zip(records, counts):
        bits = "".join(str(bit) for bit in record.outcome.bits)
        print(f"outcome {record.outcome.name} (bits {bits}): {count}")
    mean_fidelity = float(np.dot(counts, [r.fidelity for r in records]) / args.shots)
    print(f"mean fidelity {mean_fidelity:.6f}")
    return EXIT_OK


def cmd_deviation(args) -> int:
    psi = _state_from_args(args)
    env = _env_from_args(args)
    a, b = psi.amplitudes
    rho3 = reduced_state(a, b, env)
    rho1 = to_density(psi)
    literal = reduced_state_paper_literal(a, b, env)
    print(f"delta_canonical {deviation(rho3, rho1):.12g}")
    print(f"delta_paper {deviation_closed_form_paper(a, b, env):.12g}")
    print(f"fidelity {fidelity(psi, rho3):.12g}")
    print(f"purity {purity(rho3):.12g}")
    print("rho3 (canonical partial trace):")
    print(_fmt_matrix(rho3.mat))
    print("rho3 (printed closed form):")
    print(_fmt_matrix(literal))
    return EXIT_OK


def cmd_paper_check(args) -> int:
    psi = _state_from_args(args)
    env = _env_from_args(args)
    a, b = psi.amplitudes
    rho3 = reduced_state(a, b, env)
    rho1 = to_density(psi)
    literal = reduced_state_paper_literal(a, b, env)
    diff = literal - rho3.mat
    print("rho3 (canonical partial trace):")
    print(_fmt_matrix(rho3.mat))
    print(f"trace_canonical {np.trace(rho3.mat).real:.12g}")
    print("rho3 (printed closed form):")
    print(_fmt_matrix(literal))
    print(f"trace_paper {np.trace(literal).real:.12g}")
    print("entrywise difference (printed - canonical):")
    print(_fmt_matrix(diff))
    print(f"max_abs_difference {np.abs(diff).max():.12g}")
    print(f"delta_canonical {deviation(rho3, rho1):.12g}")
    print(f"delta_paper {deviation_closed_form_paper(a, b, env):.12g}")
    return EXIT_OK


_SWEEP_OVERRIDE_FIELDS = tuple(
    f.name for f in fields(SweepConfig) if f.name != "output_path"
)


def _sweep_config(args) -> SweepConfig:
    cfg = load_config(args.config) if args.config else SweepConfig()
    for name in _SWEEP_OVERRIDE_FIELDS:
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.out is not None:
        cfg.output_path = args.out
    cfg.validate()
    return cfg


def render_sweep_csv(cfg: SweepConfig) -> str:
    """The full CSV text for a validated config; pure function of its input."""
    a, b, c0, c1 = cfg.a, cfg.b, cfg.c0, cfg.c1
    phase = np.exp(1j * cfg.gamma_phase)
    psi = Ket(np.array([a, b]), ("3",))
    rho1 = to_density(psi)
    lines = [",".join(CSV_FIELDS)]
    for k in range(cfg.steps):
        t = k / (cfg.steps - 1)
        gamma = (cfg.gamma_start + (cfg.gamma_end - cfg.gamma_start) * t) * phase
        env = EnvironmentModel(complex(gamma), c0, c1)
        rho3 = reduced_state(a, b, env)
        values = (
            gamma.real,
            gamma.imag,
            c0.real,
            c0.imag,
            c1.real,
            c1.imag,
            a.real,
            a.imag,
            b.real,
            b.imag,
            deviation(rho3, rho1),
            deviation_closed_form_paper(a, b, env),
            fidelity(psi, rho3),
            purity(rho3),
        )
        lines.append(",".join(f"{v:.17g}" for v in values))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    text = render_sweep_csv(cfg)
    with open(cfg.output_path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    print(f"wrote {cfg.steps} rows to {cfg.output_path}")
    return EXIT_OK


def _add_state_flags(parser: argparse.ArgumentParser, default: float | None) -> None:
    parser.add_argument("--a-re", type=float, default=default, help="Re(a)")
    parser.add_argument("--a-im", type=float, default=0.0 if default is not None else None, help="Im(a)")
    parser.add_argument("--b-re", type=float, default=default, help="Re(b)")
    parser.add_argument("--b-im", type=float, default=0.0 if default is not None else None, help="Im(b)")


def _add_env_flags(parser: argparse.ArgumentParser, default: float | None) -> None:
    parser.add_argument("--c0-re", type=float, default=default, help="Re(c0)")
    parser.add_argument("--c0-im", type=float, default=0.0 if default is not None else None, help="Im(c0)")
    parser.add_argument("--c1-re", type=float, default=default, help="Re(c1)")
    parser.add_argument("--c1-im", type=float, default=0.0 if default is not None else None, help="Im(c1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleportsim",
        description="Qubit teleportation with an environment-coupled correction step.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("teleport", help="run the ideal protocol for many shots")
    _add_state_flags(p, INV_SQRT2)
    p.add_argument("--shots", type=int, default=1000, help="number of protocol runs")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.set_defaults(func=cmd_teleport)

    for name, func, help_text in (
        ("deviation", cmd_deviation, "deviation report at one parameter point"),
        ("paper-check", cmd_paper_check, "canonical vs printed reduced state"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_state_flags(p, INV_SQRT2)
        _add_env_flags(p, INV_SQRT2)
        p.add_argument("--gamma", type=float, default=1.0, help="overlap magnitude")
        p.add_argument("--gamma-phase", type=float, default=0.0, help="overlap phase (radians)")
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", help="CSV sweep over the overlap magnitude")
    _add_state_flags(p, None)
    _add_env_flags(p, None)
    p.add_argument("--gamma-start", type=float, default=None, help="first overlap magnitude")
    p.add_argument("--gamma-end", type=float, default=None, help="last overlap magnitude")
    p.add_argument("--steps", type=int, default=None, help="number of grid points (>= 2)")
    p.add_argument("--gamma-phase", type=float, default=None, help="overlap phase (radians)")
    p.add_argument("--seed", type=int, default=None, help="seed recorded in the config")
    p.add_argument("--config", type=str, default=None, help="key = value config file")
    p.add_argument("--out", type=str, default=None, help="output CSV path")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
