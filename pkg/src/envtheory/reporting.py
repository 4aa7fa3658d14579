"""Tables of envelope results against the variational oracle.

Each table holds one three-body state and three rows, for ``phi = 2``, the
dominantly-orbital prediction and the value calibrated on the ground state
of the same potential. Columns are the energy and ``<r>``, ``rho0``,
``<r^2>``, ``rho0^2``, ``<r^-1>``, ``rho0^-1`` with relative errors (in %)
against the oracle.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache

from .config import PhiMode, RunConfig
from .envelope import calibrate_phi, dos_phi, effective_Q, solve_et
from .errors import EmptyBasis, MixedQ0
from .model import StateSpec, SystemSpec, coulomb_system, gaussian_system, linear_system
from .model import quantum_numbers
from .observables import envelope_state, observable_report
from .oracle import OracleConfig, solve_oracle, truncated_diagnostics

__all__ = [
    "TableSpec",
    "TableRow",
    "TableReport",
    "TABLES",
    "REFERENCE_GS_ENERGY",
    "REFERENCE_CONFIG",
    "MIXED",
    "reproduce_table",
    "run",
    "solve_rows",
    "format_report",
    "hierarchy_check",
]

MIXED = "MixedQ0"

SYSTEMS = {"linear": linear_system, "coulomb": coulomb_system, "gaussian": gaussian_system}

# Oracle ground-state energies (Q*max = 18, z optimised in the bands up to 8,
# see OracleConfig.z_window), kept unrounded so that phi_GS is calibrated
# without rerunning the variational solver. For Coulomb this differs from
# the per-state optimum at Q*max = 30 (-0.2399344) by 1.5e-3 relative.
REFERENCE_GS_ENERGY = {
    "linear": 2.7529000906113668,
    "coulomb": -0.2395764272525043,
    "gaussian": -105.49413363523252,
}
REFERENCE_CONFIG = {"Qstar_max": 18, "z_window": 8}

DEFAULT_QSTAR_MAX = {"linear": 18, "coulomb": 30, "gaussian": 18}


@dataclass(frozen=True)
class TableSpec:
    id: str
    potential: str
    quanta: tuple
    L: int
    level: int = 0

    @property
    def state(self) -> StateSpec:
        return StateSpec(self.quanta, L=self.L)

    @property
    def band(self) -> int:
        return quantum_numbers(self.state, 3)[2]

    @property
    def parity(self) -> int:
        return (-1) ** self.band


_GS = ((0, 0), (0, 0))
TABLES = {
    t.id: t
    for t in [
        TableSpec("lin1", "linear", _GS, 0),
        TableSpec("lin2", "linear", ((1, 0), (0, 0)), 0, level=1),
        TableSpec("lin3", "linear", ((0, 2), (0, 0)), 2),
        TableSpec("lin4", "linear", ((0, 0), (1, 1)), 1),
        TableSpec("lin5", "linear", ((0, 2), (0, 1)), 3),
        TableSpec("coul1", "coulomb", _GS, 0),
        TableSpec("coul2", "coulomb", ((1, 0), (0, 0)), 0, level=1),
        TableSpec("coul3", "coulomb", ((0, 2), (0, 0)), 2),
        TableSpec("gauss1", "gaussian", _GS, 0),
        TableSpec("gauss2", "gaussian", ((1, 0), (0, 0)), 0, level=1),
        TableSpec("gauss3", "gaussian", ((0, 2), (0, 0)), 2),
    ]
}

COLUMNS = ("E", "r", "rho0", "r2", "rho0_sq", "rinv", "rho0_inv")
# oracle quantity each column is compared with
_REFERENCE = {"E": "E", "r": 1, "rho0": 1, "r2": 2, "rho0_sq": 2, "rinv": -1, "rho0_inv": -1}


@dataclass
class TableRow:
    """One envelope row; observable cells are None when blocked by mixed ``Q0``."""

    label: str
    phi: float
    values: dict
    errors: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None


@dataclass
class TableReport:
    id: str
    rows: list
    caption: dict = field(default_factory=dict)
    title: str = ""


def _row(system, state, L, mode_label, phi):
    sol = solve_et(system, effective_Q(state, system.D, phi), phi)
    rho = sol.rho0
    values = {"E": sol.E, "rho0": rho, "rho0_sq": rho**2, "rho0_inv": 1 / rho}
    if system.N == 3 and system.D == 3 and L is not None:
        est, _ = envelope_state(system, state, L, phi)
        for key, k in (("r", 1), ("r2", 2), ("rinv", -1)):
            values[key] = observable_report(est, rho, k, phi).exact
    else:
        values.update(r=None, r2=None, rinv=None)
    return TableRow(mode_label, phi, values)


@lru_cache(maxsize=64)
def _ground_phi(system, E_target):
    return calibrate_phi(system, StateSpec.ground(system.N), E_target)


def _resolve_phi(system, state, mode: PhiMode):
    if mode.kind == "fixed":
        return mode.value
    if mode.kind == "dos":
        return dos_phi(system, state)
    try:
        return _ground_phi(system, mode.value)
    except TypeError:  # unhashable custom laws
        return calibrate_phi(system, StateSpec.ground(system.N), mode.value)


def solve_rows(system: SystemSpec, state: StateSpec, modes, L=None) -> list:
    """Envelope rows of one state for a sequence of :class:`PhiMode`."""
    L = state.L if L is None else L
    rows = []
    for mode in modes:
        phi = _resolve_phi(system, state, mode)
        rows.append(_row(system, state, L, mode.label, phi))
    return rows


def _attach_errors(rows, ref):
    for row in rows:
        for col in COLUMNS:
            x, acc = row.values.get(col), ref.get(_REFERENCE[col])
            if x is None or acc is None:
                row.errors[col] = None
            else:
                row.errors[col] = 100 * abs(x - acc) / abs(acc)


def reproduce_table(
    id: str,
    oracle: bool = True,
    qstar_max: int | None = None,
    quad_order: int = 80,
    diagnostics: bool = False,
    z_window: int | None = None,
) -> TableReport:
    """Envelope rows of one table, with oracle errors and caption data.

    ``oracle=False`` skips the variational solver: the rows are built from
    the envelope equations alone and ``phi_GS`` uses the stored reference
    ground-state energies. ``diagnostics=True`` adds the size ratio and band
    weight of a basis truncated at ten quanta.
    ``z_window`` is passed to :class:`OracleConfig`; the default optimises
    ``z`` on the full basis.
    """
    spec = TABLES[id]
    system = SYSTEMS[spec.potential]()
    modes = (
        PhiMode("fixed", 2.0),
        PhiMode("dos"),
        PhiMode("calibrate", REFERENCE_GS_ENERGY[spec.potential]),
    )
    rows = solve_rows(system, spec.state, modes, spec.L)
    report = TableReport(id, rows, title=f"{spec.potential} |1;{spec.band};{spec.L}"
                         f"{'+' if spec.parity > 0 else '-'}>")
    if not oracle:
        return report
    qmax = qstar_max or DEFAULT_QSTAR_MAX[spec.potential]
    cfg = OracleConfig(
        L=spec.L, parity=spec.parity, Qstar_max=qmax, level=spec.level,
        quad_order=quad_order, et_band=spec.band, z_window=z_window,
    )
    sol = solve_oracle(system, cfg)
    ref = {"E": sol.E_acc, **sol.moments}
    _attach_errors(rows, ref)
    report.caption = {
        "E_acc": sol.E_acc,
        "nu": sol.nu,
        "weight": sol.weight(spec.band),
        "band": spec.band,
        "z_opt": sol.z_opt,
        "z_mode": sol.z_mode,
        "Qstar_max": qmax,
        "convergence": sol.convergence_delta,
    }
    if diagnostics:
        d = truncated_diagnostics(system, cfg)
        report.caption["truncated_nu"] = d["nu"]
        report.caption["truncated_inverse_nu"] = d["inverse_nu"]
        report.caption["truncated_weight"] = d["weight"]
    return report


def run(config: RunConfig) -> TableReport:
    """Envelope rows for a run configuration, with oracle comparison if enabled."""
    system, state = config.system, config.state
    rows = solve_rows(system, state, config.phi_modes)
    report = TableReport("run", rows, title=f"state {state.quanta}")
    if config.oracle:
        _, _, band, parity = quantum_numbers(state, system.D)
        cfg = OracleConfig(
            L=state.L or 0, parity=parity, sigma=state.sigma, Qstar_max=config.qstar_max,
            level=config.level, quad_order=config.quad_order, et_band=band,
        )
        sol = solve_oracle(system, cfg)
        _attach_errors(rows, {"E": sol.E_acc, **sol.moments})
        report.caption = {
            "E_acc": sol.E_acc, "nu": sol.nu, "weight": sol.weight(band), "band": band,
            "z_opt": sol.z_opt, "z_mode": sol.z_mode, "Qstar_max": config.qstar_max,
            "convergence": sol.convergence_delta,
        }
    return report


def _sig(x, digits):
    if x is None:
        return MIXED
    if x == 0:
        return "0"
    return f"{x:#.{digits}g}".rstrip(".")


def _err(e):
    if e is None:
        return ""
    return f"[{e:#.3g}]" if e >= 0.005 else "[0.0]"


def format_report(report: TableReport, fmt: str = "table", precision: int = 4) -> str:
    """Plain-text table (``precision`` significant figures) or 12-digit CSV."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "phi_label", "phi"] + [c for col in COLUMNS for c in (col, f"{col}_err_pct")])
        for row in report.rows:
            cells = [report.id, row.label, f"{row.phi:.12g}"]
            for col in COLUMNS:
                v, e = row.values.get(col), row.errors.get(col)
                cells.append(MIXED if v is None else f"{v:.12g}")
                cells.append("" if e is None else f"{e:.12g}")
            w.writerow(cells)
        return buf.getvalue()
    head = ["phi", "E", "<r>", "rho0", "<r2>", "rho0^2", "<r-1>", "rho0^-1"]
    lines = []
    for row in report.rows:
        cells = [f"{_sig(row.phi, precision)} ({row.label})" if row.label in ("DOS", "GS")
                 else _sig(row.phi, precision)]
        for col in COLUMNS:
            v = row.values.get(col)
            cells.append(_sig(v, precision) + ("" if v is None else _err(row.errors.get(col))))
        lines.append(cells)
    widths = [max(len(h), *(len(r[i]) for r in lines)) for i, h in enumerate(head)]
    out = [f"# {report.id}: {report.title}" if report.title else f"# {report.id}"]
    out.append("  ".join(h.rjust(w) for h, w in zip(head, widths)))
    out += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in lines]
    cap = report.caption
    if cap:
        text = f"E_acc={_sig(cap['E_acc'], precision)}"
        if cap.get("nu") is not None:
            text += f"  nu={cap['nu']:.2f}"
        text += f"  sum d^2({cap['band']})={cap['weight']:.3f}  Q*max={cap['Qstar_max']}"
        out.append(text)
        if "truncated_nu" in cap:
            out.append(
                f"truncated basis: lambda1/z={cap['truncated_nu']:.2f}"
                f"  z/lambda1={cap['truncated_inverse_nu']:.2f}"
                f"  sum d^2={cap['truncated_weight']:.3f}"
            )
    return "\n".join(out) + "\n"


# lowest symmetric levels of the linear potential, as (L, parity, level)
_HIERARCHY = {"lin1": (0, 1, 0), "lin2": (0, 1, 1), "lin3": (2, 1, 0), "lin4": (1, -1, 0),
              "lin5": (3, -1, 0)}


def hierarchy_check(qstar_max: int = 12, L_max: int = 4, rtol: float = 1e-3) -> dict:
    """Compare the ordering of the five lowest linear levels, envelope vs oracle.

    Every symmetric ``(L, parity)`` block with ``L <= L_max`` is solved so
    that the oracle's five lowest levels are the true ones. The orderings
    agree when the same five states come out and no pair is strictly
    ordered in opposite ways (levels closer than ``rtol`` are degenerate).
    """
    system = linear_system()
    oracle_levels = []
    for L in range(L_max + 1):
        for parity in (1, -1):
            for level in (0, 1):
                cfg = OracleConfig(L=L, parity=parity, Qstar_max=qstar_max + (parity < 0),
                                   level=level)
                try:
                    sol = solve_oracle(system, cfg)
                except (EmptyBasis, IndexError):
                    continue
                oracle_levels.append((sol.E_acc, (L, parity, level)))
    oracle_levels.sort()
    lowest = [key for _, key in oracle_levels[:5]]
    et = {}
    for tid, key in _HIERARCHY.items():
        spec = TABLES[tid]
        et[key] = solve_et(system, effective_Q(spec.state, 3, 2.0)).E
    acc = dict((key, E) for E, key in oracle_levels)

    def before(energies, a, b):
        return energies[b] - energies[a] > rtol * abs(energies[a])

    # no pair may be strictly ordered one way by one method and the other way by the other
    ok = set(lowest) == set(et) and not any(
        (before(et, a, b) and before(acc, b, a)) or (before(acc, a, b) and before(et, b, a))
        for a in lowest for b in lowest
    )
    return {"ok": ok, "oracle": [(key, acc[key]) for key in lowest],
            "envelope": sorted(et.items(), key=lambda kv: kv[1])}
