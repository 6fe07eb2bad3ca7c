"""Command-line entry point: ``qpchem integrals | acse | fci | check-rdm``.

Exit codes: 0 success (a non-converged ACSE run still counts), 1 usage or
configuration error, 2 I/O or input-format error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from qpchem.acse import ACSEResult, SolverConfig, acse_solve
from qpchem.chem import (
    FCIDUMPError,
    MolecularProblem,
    SCFConvergenceError,
    fcidump_write,
    load_sto3g,
    molecular_problem,
    problem_from_fcidump,
    read_basis,
    read_geometry,
)
from qpchem.fci import fci_ground_state
from qpchem.rdm import SectorError, dump_rdm, load_rdm, n_rep_check
from qpchem.secondq import Statistics
from qpchem.tensorspace import dump_amplitudes

log = logging.getLogger("qpchem")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3

CSV_COLUMNS = (
    "iteration",
    "energy_hartree",
    "abs_error_vs_fci",
    "log10_error",
    "residual_norm",
    "cumulative_cnots",
    "epsilon",
)
ERROR_FLOOR = 1e-16  # log10_error of an exact hit is clamped here


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    geometry: str | None = None
    basis: str | None = None
    fcidump: str | None = None
    encoding: str = "both"
    epsilon0: float = 0.1
    line_search: bool = True
    conjugate: bool = True
    max_iters: int = 60
    residual_tol: float = 1e-6
    energy_tol: float = 1e-9
    out: str = "acse_out"
    format: list[str] = field(default_factory=lambda: ["csv", "json"])

    def validate(self) -> None:
        if (self.fcidump is None) == (self.geometry is None):
            raise UsageError("give exactly one input: --geometry [--basis] or --fcidump")
        if self.fcidump is not None and self.basis is not None:
            raise UsageError("--basis only applies to --geometry input")
        if self.encoding not in ("fermionic", "qubit", "both"):
            raise UsageError(f"unknown encoding {self.encoding!r}")
        bad = set(self.format) - {"csv", "json"}
        if bad or not self.format:
            raise UsageError(f"--format takes a comma list of csv,json; got {','.join(self.format)}")
        try:
            for enc in self.encodings:
                self.solver_config(enc)
        except ValueError as err:
            raise UsageError(str(err)) from err

    @property
    def encodings(self) -> list[Statistics]:
        if self.encoding == "both":
            return [Statistics.FERMIONIC, Statistics.QUBIT]
        return [Statistics.parse(self.encoding)]

    def solver_config(self, encoding: Statistics) -> SolverConfig:
        return SolverConfig(
            encoding=encoding,
            epsilon0=self.epsilon0,
            line_search=self.line_search,
            conjugate=self.conjugate,
            max_iterations=self.max_iters,
            energy_tol=self.energy_tol,
            residual_tol=self.residual_tol,
        )


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("on", "true", "yes", "1"):
        return True
    if value in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"expected on/off, got {text!r}")


def _parse_formats(text: str) -> list[str]:
    return [f.strip().lower() for f in text.split(",") if f.strip()]


_CONVERTERS = {
    "epsilon0": float,
    "line_search": _parse_bool,
    "conjugate": _parse_bool,
    "max_iters": int,
    "residual_tol": float,
    "energy_tol": float,
    "format": _parse_formats,
}


def read_config_file(path: str | Path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment; keys are RunConfig fields."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in known:
            raise UsageError(f"{path}:{lineno}: expected 'key = value' with key in {sorted(known)}")
        value = value.strip()
        try:
            out[key] = _CONVERTERS.get(key, str)(value)
        except ValueError as err:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from err
    return out


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--geometry", help="geometry file ('angstrom' or 'bohr' header, then 'element x y z')")
    p.add_argument("--basis", help="basis file (default: built-in STO-3G)")
    p.add_argument("--fcidump", help="FCIDUMP file with MO integrals")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpchem", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log every iteration")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrals", help="RHF on a geometry and write an FCIDUMP")
    p.add_argument("--geometry", required=True)
    p.add_argument("--basis")
    p.add_argument("--out", required=True, help="FCIDUMP path to write")

    p = sub.add_parser("acse", help="run the ACSE in one or both encodings")
    p.add_argument("--config", help="'key = value' file; flags override it")
    _add_input_flags(p)
    p.add_argument("--encoding", choices=["fermionic", "qubit", "both"])
    p.add_argument("--epsilon0", type=float)
    p.add_argument("--line-search", dest="line_search", type=_parse_bool, metavar="on|off")
    p.add_argument("--conjugate", type=_parse_bool, metavar="on|off",
                   help="mix the previous direction into each step (default on)")
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--residual-tol", dest="residual_tol", type=float)
    p.add_argument("--energy-tol", dest="energy_tol", type=float)
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", type=_parse_formats, help="comma list of csv,json")

    p = sub.add_parser("fci", help="exact ground-state energy in the lowest |Sz| sector")
    _add_input_flags(p)
    p.add_argument("--dump-amplitudes", metavar="PATH", help="write 'index real imag' lines")

    p = sub.add_parser("check-rdm", help="N-representability report for a 2-RDM dump")
    p.add_argument("dump")
    p.add_argument("--nelec", type=int, help="electron count (default: from the dump header)")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    return parser


def _load_problem(geometry: str | None, basis: str | None, fcidump: str | None) -> MolecularProblem:
    if fcidump is not None:
        return problem_from_fcidump(fcidump)
    if geometry is None:
        raise UsageError("need --geometry or --fcidump")
    bs = load_sto3g() if basis is None else read_basis(basis)
    return molecular_problem(read_geometry(geometry), bs)


def cmd_integrals(args: argparse.Namespace) -> int:
    bs = load_sto3g() if args.basis is None else read_basis(args.basis)
    prob = molecular_problem(read_geometry(args.geometry), bs)
    fcidump_write(prob.mo, prob.nelec, args.out)
    print(f"E_nuc = {prob.mo.e_nuc:.15f}")
    print(f"E_HF = {prob.scf.energy:.15f}")
    print(f"NORB = {prob.mo.n_orb}  NELEC = {prob.nelec}")
    return EXIT_OK


def _fmt(x: float | int) -> str:
    return str(x) if isinstance(x, int) else f"{x:.15g}"


def write_trace_csv(result: ACSEResult, e_fci: float, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in result.trace.records:
            err = abs(rec.energy - e_fci)
            writer.writerow([
                _fmt(rec.iteration),
                _fmt(rec.energy),
                _fmt(err),
                _fmt(math.log10(max(err, ERROR_FLOOR))),
                _fmt(rec.residual_norm),
                _fmt(int(rec.cumulative_cnots)),
                _fmt(rec.epsilon),
            ])


def run_config(cfg: RunConfig) -> dict:
    """Run every requested encoding and write outputs; returns the summary."""
    cfg.validate()
    prob = _load_problem(cfg.geometry, cfg.basis, cfg.fcidump)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    e_fci, _ = fci_ground_state(prob.spin, prob.nelec)
    summary = {
        "nelec": prob.nelec,
        "num_qubits": prob.spin.n_orb,
        "e_nuc": prob.mo.e_nuc,
        "e_hf": None if prob.scf is None else prob.scf.energy,
        "e_fci": e_fci,
        "modes": {},
    }
    for enc in cfg.encodings:
        result = acse_solve(prob.spin, prob.nelec, cfg.solver_config(enc))
        name = enc.value
        if "csv" in cfg.format:
            write_trace_csv(result, e_fci, out / f"trace_{name}.csv")
        dump_rdm(result.rdm, out / f"rdm_{name}.txt")
        report = n_rep_check(result.rdm)
        summary["modes"][name] = {
            "final_energy": result.energy,
            "abs_error_vs_fci": abs(result.energy - e_fci),
            "converged": result.converged,
            "stop_reason": result.trace.stop_reason,
            "iterations": len(result.trace.records),
            "total_cnots": int(result.trace.cumulative_cnots[-1]) if result.trace.records else 0,
            "n_representability": report.to_dict(),
        }
    if "json" in cfg.format:
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary


def _run_config_from_args(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    return RunConfig(**values)


def cmd_acse(args: argparse.Namespace) -> int:
    cfg = _run_config_from_args(args)
    summary = run_config(cfg)
    print(f"E_FCI = {summary['e_fci']:.15f}")
    for name, mode in summary["modes"].items():
        flag = "" if mode["converged"] else "  (not converged)"
        print(f"{name}: E = {mode['final_energy']:.15f}  |E - E_FCI| = {mode['abs_error_vs_fci']:.3e}"
              f"  iterations = {mode['iterations']}  CNOTs = {mode['total_cnots']}{flag}")
    return EXIT_OK


def cmd_fci(args: argparse.Namespace) -> int:
    prob = _load_problem(args.geometry, args.basis, args.fcidump)
    r = prob.spin.n_orb
    if not 0 < prob.nelec <= r:
        raise SectorError(f"empty sector: NELEC={prob.nelec} with {r} spin orbitals")
    # spin-free Hamiltonian: every multiplet has a component at the lowest |Sz|
    energy, state = fci_ground_state(prob.spin, prob.nelec, sz=0.5 * (prob.nelec % 2))
    print(f"{energy:.17g}")
    if args.dump_amplitudes:
        dump_amplitudes(state, args.dump_amplitudes, tol=1e-14)
    return EXIT_OK


def cmd_check_rdm(args: argparse.Namespace) -> int:
    rdm = load_rdm(args.dump, args.nelec)
    report = n_rep_check(rdm)
    print(report.to_json() if args.json else report.to_text())
    return EXIT_OK


COMMANDS = {
    "integrals": cmd_integrals,
    "acse": cmd_acse,
    "fci": cmd_fci,
    "check-rdm": cmd_check_rdm,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap to 1
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        print(f"qpchem: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, FCIDUMPError) as err:
        print(f"qpchem: {err}", file=sys.stderr)
        return EXIT_IO
    except (SCFConvergenceError, SectorError, np.linalg.LinAlgError) as err:
        print(f"qpchem: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as err:  # malformed geometry, basis or RDM files
        print(f"qpchem: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
