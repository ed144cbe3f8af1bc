#!/usr/bin/env python3
"""Smoke test for the triwell_py extension module.

Builds nothing itself: run `cargo build -p triwell-python` first, then
`python3 python/smoke_test.py`. The script copies the cdylib next to a
temporary directory under the import name and exercises every binding.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def import_module():
    candidates = [
        REPO / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("libtriwell_py.so", "triwell_py.so", "libtriwell_py.dylib")
    ]
    lib = next((p for p in candidates if p.exists()), None)
    if lib is None:
        sys.exit("build the extension first: cargo build -p triwell-python")
    stage = Path(tempfile.mkdtemp(prefix="triwell_py_"))
    shutil.copy2(lib, stage / "triwell_py.so")
    sys.path.insert(0, str(stage))
    import triwell_py

    return triwell_py


def approx(a, b, tol):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    tw = import_module()
    print(f"triwell_py {tw.__version__} loaded; columns: {len(tw.COLUMNS)}")

    # Analytic route: HZ peak N/4, Duan-Simon floor, Reid product at 1.
    fock = tw.SystemConfig(j=1.0, chi=0.0, n_atoms=200, initial_state="fock",
                           t_max=5.0, grid_dt=0.01)
    series = tw.analytic_series(fock)
    approx(max(series["xi13"]), 50.0, 1e-2)  # grid max sits near, not at, the peak
    assert min(series["DSp13"]) >= 4.0 - 1e-10
    assert min(series["DSm13"]) >= 4.0 - 1e-10
    coherent = tw.SystemConfig(j=1.0, chi=0.0, n_atoms=200, initial_state="coherent",
                               t_max=2.0)
    cseries = tw.analytic_series(coherent)
    assert max(abs(x) for x in cseries["xi13"]) < 1e-12
    assert all(abs(g - 1.0) < 1e-9 for g in cseries["gamma13"])
    print("analytic route ok")

    # Initial moments.
    m = tw.initial_state_moments(fock)
    assert m["var_n"] == 0.0 and m["quad_vars"][2] == 401.0

    # Exact oracle vs analytic at small N.
    small = tw.SystemConfig(j=1.0, chi=0.0, n_atoms=3, initial_state="fock",
                            t_max=2.0, grid_dt=0.1)
    exact = tw.oracle_series(small)
    ana = tw.analytic_series(small)
    for col in ("N1", "N2", "xi13", "DSm13"):
        for a, b in zip(exact[col], ana[col]):
            approx(a, b, 1e-8)
    print("oracle route ok")

    # Stochastic route: small interacting ensemble against the exact oracle.
    stoch_cfg = tw.SystemConfig(j=1.0, chi=0.05, n_atoms=3, initial_state="fock",
                                t_max=1.0, grid_dt=0.1, n_traj=4000, seed=11)
    stoch = tw.stochastic_series(stoch_cfg)
    assert stoch["n_diverged"] == 0
    exact = tw.oracle_series(tw.SystemConfig(j=1.0, chi=0.05, n_atoms=3,
                                             initial_state="fock", t_max=1.0,
                                             grid_dt=0.1))
    for k, t in enumerate(stoch["t"]):
        diff = abs(stoch["N2"][k] - exact["N2"][k])
        band = 5.0 * stoch["N2_se"][k] + 1e-6
        assert diff <= band, f"t={t}: N2 off by {diff} (band {band})"
    print(f"stochastic route ok (n_used={stoch['n_used']})")

    # Beamsplitter closed forms vs the exact transformation.
    for kwargs in ({"input": "fock", "n": 4}, {"input": "coherent", "n": 2.5},
                   {"input": "squeezed", "r": 0.8}):
        closed = tw.beamsplitter_witnesses(**kwargs)
        oracle = tw.beamsplitter_oracle(**kwargs)
        for key in ("xi_ab", "sigma_ab", "DSp_ab", "DSm_ab", "gamma_ab"):
            approx(closed[key], oracle[key], 1e-8)
    g = tw.beamsplitter_witnesses(input="squeezed", r=1.0)["gamma_ab"]
    approx(g, 2.0 / (1.0 + math.cosh(1.0)), 1e-12)
    assert g < 1.0
    print("beamsplitter route ok")

    print("smoke test passed")


if __name__ == "__main__":
    main()
