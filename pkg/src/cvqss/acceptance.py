"""Acceptance criteria, runnable from pytest and from ``cvqss verify``.

Each ``criterion_*`` function returns a :class:`CriterionResult`; tolerances
are fixed constants here, not parameters.
"""

from __future__ import annotations

import contextlib
import csv
import io as _io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import cli, cost, decoder, fidelity, gaussian, oracles
from .matlib import ortho_error
from .scheme import ThresholdParams, random_encoding

GOLDEN_SEED = 42
A_VALUES = (math.exp(-1), 1.0, math.e, math.exp(3))
AMPLITUDES = ((0.0, 0.0), (3.0, -2.0), (-1.5, 0.7))


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "data": self.data}


def golden(k: int):
    return random_encoding(ThresholdParams.canonical(k), GOLDEN_SEED)


def criterion_two_squeezers(seeds: int = 20, ks=(2, 3, 4, 5), inject_fault: bool = False) -> CriterionResult:
    worst = {"squeezers": 0, "orthogonality": 0.0, "reconstruction": 0.0}
    plans = 0
    for k in ks:
        for seed in range(seeds):
            enc = random_encoding(ThresholdParams.canonical(k), seed)
            for subset in itertools.combinations(range(enc.n), k):
                p = decoder.plan(enc, subset)
                z = p.Z * (1.0 + 1e-6) if inject_fault else p.Z
                worst["squeezers"] = max(worst["squeezers"], p.squeezer_count())
                worst["orthogonality"] = max(worst["orthogonality"], ortho_error(z),
                                             ortho_error(p.X_hat))
                worst["reconstruction"] = max(worst["reconstruction"],
                                              float(np.max(np.abs(p.X_hat @ p.V_d @ z - p.T))))
                plans += 1
    passed = worst["squeezers"] <= 2 and worst["orthogonality"] <= 1e-10 and worst["reconstruction"] <= 1e-10
    detail = (f"{plans} plans; max squeezers {worst['squeezers']}, orthogonality "
              f"{worst['orthogonality']:.1e}, reconstruction {worst['reconstruction']:.1e}")
    return CriterionResult("1 two-squeezer theorem", passed, detail, dict(worst, plans=plans))


def criterion_fidelity_vs_simulation() -> CriterionResult:
    worst_route, worst_amp = 0.0, 0.0
    for k in (2, 3):
        enc = golden(k)
        for subset in itertools.combinations(range(enc.n), k):
            for a in A_VALUES:
                sims = []
                for m in AMPLITUDES:
                    f_sim, f_an = fidelity.end_to_end_fidelity(enc, subset, a, secret_mean=m)
                    worst_route = max(worst_route, abs(f_sim - f_an))
                    sims.append(f_sim)
                worst_amp = max(worst_amp, max(sims) - min(sims))
    passed = worst_route <= 1e-6 and worst_amp <= 1e-9
    return CriterionResult(
        "2 fidelity formula vs simulation", passed,
        f"max |F_sim - F_analytic| {worst_route:.1e} (tol 1e-6); amplitude spread {worst_amp:.1e} (tol 1e-9)",
        {"route": worst_route, "amplitude": worst_amp},
    )


def _emitted_curve(u: float, v: float) -> list[tuple[float, float]]:
    buf = _io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(["fidelity-curve", "--u", str(u), "--v", str(v), "--r=-2:3:0.1"])
    if code != 0:
        raise RuntimeError(f"fidelity-curve exited {code}")
    rows = list(csv.DictReader(_io.StringIO(buf.getvalue())))
    return [(float(r["r"]), float(r["F"])) for r in rows]


def criterion_reference_curves() -> CriterionResult:
    checks = {}
    for (u, v), f0 in (((0.5, 1.0), 0.76980), ((3.0, 5.0), 0.11605)):
        curve = _emitted_curve(u, v)
        rs = [r for r, _ in curve]
        fs = np.array([f for _, f in curve])
        at = dict(curve)
        checks[f"u={u},v={v}"] = {
            "rows": len(curve),
            "span": rs[0] == -2.0 and rs[-1] == 3.0,
            "monotone": bool(np.all(np.diff(fs) > 0)),
            "F0": at[0.0],
            "F0_ok": abs(at[0.0] - f0) <= 1e-5,
            "F3": at[3.0],
            "to_zero": bool(fs[0] <= 0.1 * at[0.0]),
        }
    first = checks["u=0.5,v=1.0"]
    passed = all(c["span"] and c["monotone"] and c["F0_ok"] and c["to_zero"] for c in checks.values())
    passed = passed and first["F3"] > 0.99
    detail = "; ".join(f"{name}: F(0)={c['F0']:.5f} F(3)={c['F3']:.5f} monotone={c['monotone']}"
                       for name, c in checks.items())
    return CriterionResult("3 reference fidelity curves", passed, detail, checks)


def _samples(region, count: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        alpha, beta = rng.uniform(-3, 3, 2)
        if abs(alpha) < 0.05 or abs(abs(alpha) - 1) < 0.05:
            continue
        if region(alpha, beta):
            out.append((float(alpha), float(beta)))
    return out


def criterion_squeezing_minimum(count: int = 50) -> CriterionResult:
    worst_ii = 0.0
    for alpha, beta in _samples(cost.in_case_ii_region, count, 11):
        oracle = cost.minimize_gamma_oracle(alpha, beta)
        worst_ii = max(worst_ii, abs(cost.case_ii_closed_form(alpha, beta) - oracle.r_min))
    worst_i = 0.0
    printed_hits = evaluated_hits = 0
    for alpha, beta in _samples(cost.in_case_i_region, count, 12):
        oracle = cost.minimize_gamma_oracle(alpha, beta)
        worst_i = max(worst_i, abs(cost.minimize_gamma_analytic(alpha, beta).r_min - oracle.r_min))
        printed_hits += abs(cost.case_i_printed(alpha, beta) - oracle.r_min) <= 1e-6
        evaluated_hits += abs(cost.case_i_evaluated(alpha, beta) - oracle.r_min) <= 1e-6
    passed = worst_ii <= 1e-6 and worst_i <= 1e-6
    detail = (f"case (ii) closed form max err {worst_ii:.1e}; case (i) candidate route max err {worst_i:.1e}; "
              f"finding: |ln(kappa alpha)| matches oracle {printed_hits}/{count}, "
              f"|ln(alpha sqrt(kappa))| matches {evaluated_hits}/{count}")
    return CriterionResult("4 squeezing minimisation", passed, detail, {
        "case_ii_err": worst_ii, "case_i_err": worst_i,
        "printed_matches": printed_hits, "evaluated_matches": evaluated_hits, "samples": count,
    })


CHANNEL_POINTS = (
    (0.5, 1.0, 1.0, (0.0, 0.0)),
    (3.0, 5.0, 1.0, (1.0, -2.0)),
    (1.2, 0.7, math.e, (2.0, 1.0)),
    (2.0, 0.4, 0.6, (-1.0, 3.0)),
    (0.3, 2.5, 2.0, (0.5, 0.5)),
)


def criterion_channel() -> CriterionResult:
    worst = 0.0
    sym_exact = True
    for u, v, a, m in CHANNEL_POINTS:
        p = fidelity.DegradationParams(u, v, a)
        moment = gaussian.overlap_with_coherent(fidelity.replicated_state_analytic(p, m), m)
        worst = max(worst, abs(moment - oracles.channel_fidelity_quadrature(u, v, a, m)))
        sym_exact &= fidelity.analytic_fidelity(p) == fidelity.analytic_fidelity(fidelity.DegradationParams(v, u, a))
    identity = True
    for m in AMPLITUDES:
        st = fidelity.replicated_state_analytic(fidelity.DegradationParams(0.0, 0.0, 1.3), m)
        ref = gaussian.GaussianState.coherent(m)
        identity &= bool(np.array_equal(st.mean, ref.mean) and np.array_equal(st.cov, ref.cov))
    passed = worst <= 1e-7 and sym_exact and identity
    return CriterionResult(
        "5 replicated-state channel", passed,
        f"max |F_moment - F_quadrature| {worst:.1e} over {len(CHANNEL_POINTS)} points (tol 1e-7); "
        f"u<->v symmetric: {sym_exact}; u=v=0 identity: {identity}",
        {"quadrature_err": worst, "symmetric": sym_exact, "identity": identity},
    )


def criterion_security() -> CriterionResult:
    enc = golden(2)
    series = {}
    passed = True
    for adv in itertools.combinations(range(enc.n), enc.k - 1):
        vals = [fidelity.adversary_leakage(enc, adv, math.exp(r), ((0.0, 0.0), (3.0, 0.0))) for r in range(6)]
        series["-".join(str(i + 1) for i in adv)] = vals
        passed &= all(b <= a for a, b in zip(vals, vals[1:])) and vals[-1] <= 1e-3
    worst_end = max(v[-1] for v in series.values())
    return CriterionResult(
        "6 security limit", passed,
        f"leakage nonincreasing on r=0..5 for every adversary; max at r=5 {worst_end:.1e} (tol 1e-3)",
        series,
    )


NO_CLONING_CASES = ((2, 4), (2, 5), (3, 6), (3, 7), (3, 9), (4, 8), (4, 10), (5, 10), (5, 12), (6, 12))


def criterion_no_cloning() -> CriterionResult:
    codes = {}
    for k, n in NO_CLONING_CASES:
        with contextlib.redirect_stdout(_io.StringIO()), contextlib.redirect_stderr(_io.StringIO()):
            codes[f"{k},{n}"] = cli.main(["scheme", "--k", str(k), "--n", str(n)])
    passed = all(c == cli.EXIT_NO_CLONING for c in codes.values())
    return CriterionResult("7 no-cloning guard", passed,
                           f"exit codes {sorted(set(codes.values()))} for {len(codes)} (k,n) with n >= 2k", codes)


def criterion_perfect_limit() -> CriterionResult:
    a = math.exp(6)
    infidelity = {}
    for k in (2, 3):
        enc = golden(k)
        for subset in itertools.combinations(range(enc.n), k):
            f_sim, _ = fidelity.end_to_end_fidelity(enc, subset, a, secret_mean=(1.0, -1.0))
            infidelity[f"({k},{enc.n}) " + "-".join(str(i + 1) for i in subset)] = 1.0 - f_sim
    bad = {key: val for key, val in infidelity.items() if val > 1e-4}
    detail = f"max 1-F at r=6: {max(infidelity.values()):.2e} (tol 1e-4)"
    if bad:
        detail += "; over tolerance: " + ", ".join(f"{k_}={v_:.2e}" for k_, v_ in bad.items())
    return CriterionResult("8 perfect-replication limit", not bad, detail, infidelity)


CRITERIA = (
    criterion_two_squeezers,
    criterion_fidelity_vs_simulation,
    criterion_reference_curves,
    criterion_squeezing_minimum,
    criterion_channel,
    criterion_security,
    criterion_no_cloning,
    criterion_perfect_limit,
)


def run_all(inject_fault: bool = False) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        if crit is criterion_two_squeezers:
            results.append(crit(inject_fault=inject_fault))
        else:
            results.append(crit())
    return results
