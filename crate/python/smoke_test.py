"""Smoke test for the kmsflow Python extension.

Build and install the module first, e.g. ``maturin build -m crates/py/Cargo.toml``
followed by ``pip install target/wheels/kmsflow-*.whl``.
"""

import json
import math
import pathlib

import kmsflow

ROOT = pathlib.Path(__file__).resolve().parent.parent


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    h = kmsflow.Dynamics([2], [[[0, 0], [0, 1]]])
    g = h.gibbs(1.0)
    assert close(sum(g.block_weights()), 1.0)
    assert h.kms_defect(g, 1.0) < 1e-9
    assert h.kms_defect(g, 1.3) > 1e-3

    grid = kmsflow.ScaleGrid(2.0, 2)
    rows = kmsflow.flow_table(h, 2.0, grid)
    assert [r["beta_out"] for r in rows] == [8.0, 4.0, 2.0, 1.0, 0.5]
    assert all(r["kms_defect"] <= 1e-9 for r in rows)

    left = kmsflow.State([2, 2], [[[0.5, 0], [0, 0.5]], [[0, 0], [0, 0]]])
    right = kmsflow.State([2, 2], [[[0, 0], [0, 0]], [[1, 0], [0, 0]]])
    assert kmsflow.is_disjoint(left, right)
    assert kmsflow.central_witness(left, right) is not None
    both = kmsflow.State.mixture([(0.5, left), (0.5, right)])
    parts = kmsflow.central_decomposition(both)
    assert [round(w, 12) for _, _, w, _ in parts] == [0.5, 0.5]

    flip = kmsflow.Action([2, 2], "cyclic", [(1, [1, 0], None)], order=2)
    ssb = flip.breaking(left)
    assert ssb["verdict"] == "BROKEN"
    assert ssb["induced"]["augmented_centre"]["hat_centre_dim"] == 2

    mixed = kmsflow.State.maximally_mixed([2])
    pure = kmsflow.State([2], [[[1, 0], [0, 0]]])
    d = kmsflow.alpha_divergence(pure, mixed, 2.0, mixed)
    assert close(d, 4 * (1 - math.sqrt(0.5)), 1e-12)
    assert kmsflow.virtual_temperature(4.0, 2.0) == 2.0
    assert close(kmsflow.lp_norm([2], [[[3, 0], [0, 4]]], 2.0), 5.0)
    try:
        kmsflow.alpha_divergence(pure, mixed, 2.0, pure)
    except kmsflow.KmsflowError:
        pass
    else:
        raise AssertionError("non-faithful reference accepted")

    beta, u, v = kmsflow.beta_decompose([2.0, 0.0, 0.0, 0.0])
    assert close(beta, 2.0) and v == [0.0, 0.0, 0.0]

    report, code = kmsflow.run_scenario(str(ROOT / "scenarios" / "z2_flip.json"))
    assert code == 0
    assert json.loads(report)["tasks"][0]["result"]["verdict"] == "BROKEN"
    csv, code = kmsflow.run_scenario(str(ROOT / "scenarios" / "two_level_flow.json"), format="csv")
    assert csv.splitlines()[0] == "lambda,beta_in,beta_out,kms_defect"

    print(f"kmsflow {kmsflow.__version__}: python smoke test passed")


if __name__ == "__main__":
    main()
