#!/usr/bin/env python3
"""Regenerate the bundled scenario files under src/tklab/scenarios/.

Every scenario is deterministic: random families carry explicit seeds and
are materialized into the JSON payloads, so the files are the single source
of truth for the suite.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

import tklab as tk
from tklab.hardy_core import CoeffVec

OUT = Path(__file__).resolve().parent.parent / "src" / "tklab" / "scenarios"


def rand_family(rng, m, N, deg, count, lo=0):
    vecs = []
    for _ in range(count):
        arr = np.zeros((m, N), complex)
        arr[:, lo:deg] = rng.standard_normal((m, deg - lo)) \
            + 1j * rng.standard_normal((m, deg - lo))
        vecs.append(CoeffVec(arr))
    return tk.orthonormalize_family(vecs)


def unit(v: CoeffVec) -> CoeffVec:
    return v * (1.0 / v.norm())


def write(name: str, payload: dict) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(payload, indent=1) + "\n")
    print("wrote", path)


def scenario(name, m, N, symbol_class, G, H, checks, symbol=None, factors=None,
             pair=None, expect=None, seed=0, tolerances=None, depth=None):
    payload = {
        "name": name, "m": m, "N": N, "symbol_class": symbol_class,
        "seed": seed, "checks": checks,
        "perturbation": {"G": [g.to_json() for g in G],
                         "H": [h.to_json() for h in H]},
    }
    if symbol is not None:
        payload["symbol"] = symbol.to_json()
    if factors is not None:
        payload["factors"] = {"F1": factors[0].to_json(),
                              "F2": factors[1].to_json()}
    if pair is not None:
        payload["pair"] = {"psi": pair[0].to_json(), "phi": pair[1].to_json()}
    if expect:
        payload["expect"] = expect
    if tolerances:
        payload["tolerances"] = tolerances
    if depth is not None:
        payload["depth"] = depth
    write(name, payload)


def main() -> None:
    # --- zero-symbol complement analyses -----------------------------------
    m, N = 3, 16
    G = tk.reproducing_column(m, N, 0)
    scenario("complement_single_column", m, N, "zero", [G],
             [tk.CoeffVec.monomial(m, N, 1, 0)], ["rank_one"],
             expect={"r": m - 1, "g_norm_max": 1e-10, "G0_norm_max": 1e-10})

    k = 3
    arr = np.zeros((m, N), complex)
    arr[0, 0] = arr[0, k] = 1 / np.sqrt(2)
    scenario("complement_split_column", m, N, "zero", [tk.CoeffVec(arr)],
             [tk.CoeffVec.monomial(m, N, 1, 0)], ["rank_one"],
             expect={"r": m})

    # inner-entry tuple: unimodular |G| on the circle forces g = 0
    m, N = 3, 32
    entries = [np.concatenate([[0.0], [1.0], np.zeros(N - 2)]),     # z
               np.concatenate([[0.0, 0.0], [1.0], np.zeros(N - 3)]),  # z^2
               tk.blaschke_taylor(0.3, N - 1)]
    arr = np.stack([e[:N] for e in entries])
    scenario("complement_inner_tuple", m, N, "zero",
             [unit(tk.CoeffVec(arr))], [tk.CoeffVec.monomial(m, N, 0, 0)],
             ["rank_one"], expect={"g_norm_max": 1e-8})

    # reproducing-kernel tuple: G0 vanishes and the k-coordinate dies
    m, N, alpha = 2, 32, 0.4
    ka = np.array([alpha ** j for j in range(N)], complex)
    scenario("complement_reproducing_tuple", m, N, "zero",
             [unit(tk.CoeffVec(np.tile(ka, (m, 1))))],
             [tk.CoeffVec.monomial(m, N, 0, 0)], ["rank_one"],
             expect={"G0_norm_max": 1e-8})

    # --- zero-symbol defect theorem ----------------------------------------
    rng = np.random.default_rng(11)
    m, N, n = 2, 32, 2
    scenario("zero_symbol_defect", m, N, "zero",
             rand_family(rng, m, N, 6, n), rand_family(rng, m, N, 6, n),
             ["defect_theorem", "representation"], seed=11)

    # --- inner symbol --------------------------------------------------------
    m, N, p = 2, 32, 2
    theta = tk.LaurentMatrixSymbol.shift(m, p)
    rng = np.random.default_rng(5)
    u = rand_family(rng, m, N, 6, 1, lo=1)[0]  # u(0) = 0
    arr = np.zeros((m, N), complex)
    arr[:, p:p + 6] = u.coeffs[:, :6]
    H = tk.CoeffVec(arr)          # H = z^p u, inside the shifted range
    scenario("inner_monomial_rank_one", m, N, "inner", [-1.0 * u], [H],
             ["defect_theorem", "rank_one", "representation"],
             symbol=theta, seed=5,
             expect={"case": "spanned_kernel", "kernel_dim": 1, "defect_dim": 1})

    # tuned so the kernel is span{u_1, u_2}: H_i = theta u_i, G_i = -u_i
    rng = np.random.default_rng(17)
    m, N = 2, 32
    theta = tk.LaurentMatrixSymbol.diagonal([[0, 0, 1.0], [0, 0, 0, 1.0]])
    us = rand_family(rng, m, N, 6, 2, lo=1)   # u_i(0) = 0 keeps the slice full
    Hs = [theta.act(u).analytic_part().resized(N) for u in us]
    scenario("inner_mixed_monomials_defect", m, N, "inner",
             [-1.0 * u for u in us], Hs,
             ["defect_theorem", "representation"], symbol=theta, seed=17,
             expect={"kernel_dim": 2})

    # --- adjoint-of-inner symbol --------------------------------------------
    s, m, N = 2, 3, 32
    theta = tk.LaurentMatrixSymbol.shift(m, s)
    Harr = np.zeros((m, N), complex)
    Harr[0, 0] = 1 / np.sqrt(2)
    Harr[0, 1] = -1 / np.sqrt(2)
    H = tk.CoeffVec(Harr)
    thH = theta.act(H).analytic_part().resized(N)
    Gz_arr = np.zeros((m, N), complex)
    Gz_arr[0, s - 1] = 1.0
    Gz_arr[1:, 0] = 1.0
    Gz = tk.CoeffVec(Gz_arr)
    scenario("adjoint_monomial_critical", m, N, "theta_star",
             [Gz + (-1.0) * thH], [H], ["rank_one"], symbol=theta,
             expect={"case": "outside_range_critical", "kernel_dim": m * s})
    scenario("adjoint_monomial_noncritical", m, N, "theta_star",
             [Gz + 1.0 * thH], [H], ["rank_one"], symbol=theta,
             expect={"case": "outside_range_noncritical", "kernel_dim": m * s})
    scenario("adjoint_range_member_critical", m, N, "theta_star",
             [-1.0 * thH], [H], ["rank_one"], symbol=theta,
             expect={"case": "in_range_critical", "kernel_dim": m * s + 1})
    scenario("adjoint_range_member_noncritical", m, N, "theta_star",
             [thH], [H], ["rank_one"], symbol=theta,
             expect={"case": "in_range_noncritical", "kernel_dim": m * s})

    # sweep-friendly variant: degrees kept tiny so N can shrink to 8
    m, N, p = 2, 32, 2
    theta = tk.LaurentMatrixSymbol.shift(m, p)
    arr = np.zeros((m, N), complex)
    arr[0, 1] = 0.6
    arr[1, 1] = 0.8j
    u = tk.CoeffVec(arr)                      # unit, u(0) = 0, degree 1
    Harr = np.zeros((m, N), complex)
    Harr[:, p:p + 2] = u.coeffs[:, :2]
    scenario("inner_monomial_sweep", m, N, "inner", [-1.0 * u],
             [tk.CoeffVec(Harr)], ["defect_theorem"], symbol=theta,
             expect={"kernel_dim": 1, "defect_dim": 1})

    # rank-2 with one family member outside the shifted range
    rng = np.random.default_rng(23)
    m, N = 2, 32
    theta = tk.LaurentMatrixSymbol.diagonal([[0, 0, 1.0], [0, 0, 0, 1.0]])
    inside = rand_family(rng, m, N, 4, 1)[0]
    g1 = theta.act(inside).analytic_part().resized(N)
    g1 = unit(g1)
    g2_raw = rand_family(rng, m, N, 5, 1)[0]
    g2 = g2_raw - tk.inner_product(g2_raw, g1) * g1
    g2 = unit(g2)
    scenario("adjoint_mixed_defect", m, N, "theta_star", [g1, g2],
             rand_family(rng, m, N, 5, 2),
             ["defect_theorem", "representation"], symbol=theta, seed=23)

    # unperturbed adjoint symbol: the kernel is the model space itself, so a
    # power sweep tracks its dimension
    m, N, s = 2, 24, 2
    scenario("adjoint_monomial_sweep", m, N, "theta_star", [], [],
             ["defect_theorem"], symbol=tk.LaurentMatrixSymbol.shift(m, s),
             expect={"kernel_dim": m * s, "defect_dim": 0})

    # --- invertible analytic factors ----------------------------------------
    m, N = 1, 40
    F1 = tk.LaurentMatrixSymbol.identity(m)
    F2 = tk.LaurentMatrixSymbol.diagonal([[2.0, 1.0]])
    rng = np.random.default_rng(29)
    h = rand_family(rng, m, N, 4, 1)[0]
    inv2 = tk.invert_analytic(F2, N - 1)
    Vc = inv2.act(h).analytic_part().resized(N)
    scale = 1.0 / Vc.norm()
    scenario("factored_symbol_rank_one", m, N, "invertible_factors",
             [-scale * Vc], [scale * h], ["rank_one"],
             factors=(F1, F2), seed=29,
             expect={"case": "spanned_kernel", "kernel_dim": 1})

    m, N = 2, 48
    F1 = tk.LaurentMatrixSymbol.diagonal([[2.0, 1.0], [2.0, 1.0]])
    F2 = tk.LaurentMatrixSymbol.diagonal([[3.0, 1.0], [2.0, 0.0, 1.0]])
    rng = np.random.default_rng(31)
    scenario("factored_symbol_defect", m, N, "invertible_factors",
             rand_family(rng, m, N, 5, 1), rand_family(rng, m, N, 5, 1),
             ["defect_theorem"], factors=(F1, F2), seed=31)

    # --- product-of-compressions counterexample -----------------------------
    m, N = 2, 16
    psi = tk.LaurentMatrixSymbol(m, {1: np.diag([1.0, 0.0])})
    phi = tk.LaurentMatrixSymbol(m, {-1: np.diag([0.0, 1.0])})
    scenario("toeplitz_product_counterexample", m, N, "raw", [], [],
             ["brown_halmos"], pair=(psi, phi),
             expect={"product_is_zero": True, "product_symbol_is_zero": True,
                     "hypothesis_met": False, "deviation_max": 1e-12})


if __name__ == "__main__":
    main()
