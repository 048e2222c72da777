"""Property suites over the built-in corpus, one report row per instance.

Every suite is deterministic for a fixed seed: instances are listed in a
canonical order and all computed values are exact integers or rationals.
"""

from __future__ import annotations

import random

from . import bounds, corpus
from .covers import lower_break_table
from .errors import InconsistentCounts, UnknownSuite
from .groups import FiniteGroup, abelian_p_bound_probe, max_ell_element_order
from .ramification import (
    filtration_from_breaks,
    hasse_arf_check,
    herbrand_phi,
    phi_transitivity_check,
    pullback_bound_check,
    quotient_filtration_by_herbrand,
    restrict_break_table,
    upper_jumps,
)

SUITE_NAMES = (
    "lemma_pullback",
    "hasse_arf",
    "transitivity",
    "claim1",
    "claim2",
    "counts",
    "all",
)


def _cover_filtration(cover):
    bt = lower_break_table(cover)
    return bt, filtration_from_breaks(bt, cover.p)


def suite_lemma_pullback(options) -> list[dict]:
    instances = []
    for rep_id in corpus.rep_ids(kinds=("tower",)):
        cover, rep, _ = corpus.get_representation(rep_id)
        report = pullback_bound_check(cover, rep)
        # Our towers are totally tame base changes, so equality is expected.
        passed = report.holds and report.equality
        instances.append(
            {
                "name": rep_id,
                "sw_base": report.sw_base,
                "sw_prime": report.sw_prime,
                "degree": report.degree,
                "holds": report.holds,
                "equality": report.equality,
                "tame_base_change": True,
                "pass": passed,
            }
        )
    return instances


def suite_hasse_arf(options) -> list[dict]:
    instances = []
    for cover_id in corpus.cover_ids():
        cover = corpus.get_cover(cover_id)
        _, filt = _cover_filtration(cover)
        jumps = upper_jumps(filt)
        integral = hasse_arf_check(filt)
        instances.append(
            {
                "name": cover_id,
                "upper_jumps": list(jumps),
                "integral": integral,
                "pass": integral,
            }
        )
    return instances


def suite_transitivity(options) -> list[dict]:
    instances = []
    for cover_id in corpus.cover_ids():
        cover = corpus.get_cover(cover_id)
        if cover.intermediate is None:
            continue
        report = phi_transitivity_check(cover)
        bt, filt = _cover_filtration(cover)
        _, bt_h, _ = restrict_break_table(bt, cover.intermediate.H_indices)
        filt_h = filtration_from_breaks(bt_h, cover.p)
        phi_h = herbrand_phi(filt_h)
        quot = quotient_filtration_by_herbrand(
            filt, cover.intermediate.H_indices, phi_h
        )
        bt_low = lower_break_table(cover.intermediate.lower)
        filt_low = filtration_from_breaks(bt_low, cover.p)
        quotient_matches = [len(s) for s in quot.subgroups] == [
            len(s) for s in filt_low.subgroups
        ]
        passed = report.ok and all(r == 0 for r in report.residuals) and quotient_matches
        instances.append(
            {
                "name": cover_id,
                "points": list(report.points),
                "residuals": list(report.residuals),
                "quotient_filtration_matches": quotient_matches,
                "pass": passed,
            }
        )
    return instances


def suite_claim1(options) -> list[dict]:
    instances = []
    combos = [
        (r, ell, n)
        for r in (1, 2)
        for (ell, n) in ((2, 1), (3, 1), (2, 2))
    ]
    for r, ell, n in combos:
        best = max_ell_element_order(r, ell, n)
        d = 0
        o = best
        while o > 1:
            o //= ell
            d += 1
        passed = d == 0 or ell ** (d - 1) <= r
        instances.append(
            {
                "name": f"gl{r}_f{ell}^{n}",
                "max_ell_order": best,
                "mode": "exhaustive",
                "pass": passed,
            }
        )
    best3 = max_ell_element_order(3, 2, 1)
    instances.append(
        {
            "name": "gl3_f2",
            "max_ell_order": best3,
            "mode": "exhaustive",
            "pass": best3 == 4,
        }
    )
    for rep_id in corpus.rep_ids():
        cover, rep, _ = corpus.get_representation(rep_id)
        structure = bounds.inertia_structure(rep.image_matrices(), cover.p)
        passed = bounds.claim1_check(structure, rep.r)
        instances.append(
            {"name": f"image:{rep_id}", "n": structure.n, "pass": passed}
        )
    return instances


def suite_claim2(options) -> list[dict]:
    instances = []
    jordan_table = options.get("jordan_table")
    for rep_id in corpus.rep_ids():
        cover, rep, big_n = corpus.get_representation(rep_id)
        _, filt = _cover_filtration(cover)
        structure = bounds.inertia_structure(rep.image_matrices(), cover.p)
        tame = bounds.tameizing_subgroup(structure)
        wild = bounds.wild_order_bound_check(
            structure, filt, rep, big_n, jordan_table=jordan_table
        )
        src_size, image_order, prime_to_p = bounds.restricted_image_through(
            rep, structure, tame.H_indices
        )
        consts = bounds.explicit_constants(
            rep.r, cover.p, structure.ell, big_n, bounds.jordan_bound(rep.r, jordan_table)
        )
        crude_ok = True
        if structure.P_order <= consts.M0:
            crude_ok = consts.crude_at_least(tame.index_tame)
        passed = (
            wild.ok
            and prime_to_p
            and image_order == tame.H_order
            and crude_ok
        )
        instances.append(
            {
                "name": rep_id,
                "N": big_n,
                "swan": wild.swan,
                "N_prime": wild.N_prime,
                "P_order": wild.P_order,
                "torus_bound": wild.torus_bound,
                "torus_bound_holds": wild.torus_bound_holds,
                "linear_bound": wild.linear_bound,
                "linear_bound_holds": wild.linear_bound_holds,
                "H_order": tame.H_order,
                "index_tame": tame.index_tame,
                "restricted_prime_to_p": prime_to_p,
                "crude_bound_ok": crude_ok,
                "pass": passed,
            }
        )
    probe = abelian_p_bound_probe(2, 2, 3, 1)
    instances.append(
        {
            "name": "abelian_probe_r2_p3_s1_l2",
            "max_order_found": probe.max_order_found,
            "linear_variant_bound": probe.linear_bound,
            "linear_variant_holds": probe.le_linear_bound,
            "torus_bound": probe.torus_bound,
            "torus_bound_holds": probe.le_torus_bound,
            "pass": probe.le_torus_bound,
        }
    )
    return instances


def _random_counts(rng: random.Random) -> bounds.DecompositionData:
    p = rng.choice((2, 3, 5, 7))
    t = rng.randint(1, 6)
    e = rng.randint(1, 8)
    f_sep = rng.randint(1, 6)
    f_insep = p ** rng.randint(0, 2)
    return bounds.DecompositionData(
        order_I=t * e * f_sep * f_insep,
        t=t,
        e=e,
        f_sep=f_sep,
        f_insep=f_insep,
        p=p,
    )


def suite_counts(options) -> list[dict]:
    import math

    seed = options.get("seed", 0)
    rng = random.Random(seed)
    instances = []
    for k in range(200):
        data = _random_counts(rng)
        report = bounds.decomposition_counts(data)
        identity_ok = (
            report.order_IC == data.e * data.f_insep
            and report.order_IC * data.t * data.f_sep == data.order_I
        )
        tame_ok = report.tame == (
            data.f_insep == 1 and math.gcd(data.e, data.p) == 1
        )
        instances.append(
            {
                "name": f"counts_{k}",
                "t": data.t,
                "e": data.e,
                "f_sep": data.f_sep,
                "f_insep": data.f_insep,
                "p": data.p,
                "order_IC": report.order_IC,
                "tame": report.tame,
                "pass": identity_ok and tame_ok,
            }
        )
    rejected = 0
    for k in range(20):
        data = _random_counts(rng)
        bad = bounds.DecompositionData(
            order_I=data.order_I + 1,
            t=data.t,
            e=data.e,
            f_sep=data.f_sep,
            f_insep=data.f_insep,
            p=data.p,
        )
        try:
            bounds.decomposition_counts(bad)
        except InconsistentCounts:
            rejected += 1
    instances.append(
        {"name": "invalid_rejected", "rejected": rejected, "pass": rejected == 20}
    )
    z6 = FiniteGroup.cyclic(6, "g")
    star = bounds.star_kernel_check(z6, range(6), f_sep=3, e=2, f_insep=1, p=2)
    instances.append(
        {
            "name": "star_kernel_z6",
            "kernel_order": star.kernel_order,
            "kernel_p_sylow_order": star.kernel_p_sylow_order,
            "pass": star.passes,
        }
    )
    return instances


_SUITES = {
    "lemma_pullback": suite_lemma_pullback,
    "hasse_arf": suite_hasse_arf,
    "transitivity": suite_transitivity,
    "claim1": suite_claim1,
    "claim2": suite_claim2,
    "counts": suite_counts,
}


def run_suite(name: str, options: dict | None = None) -> dict:
    """Run one named suite (or all); returns {"suite", "instances", "ok"}."""
    options = dict(options or {})
    if name == "all":
        instances = []
        for sub in ("lemma_pullback", "hasse_arf", "transitivity", "claim1", "claim2", "counts"):
            for inst in _SUITES[sub](options):
                inst = dict(inst)
                inst["suite"] = sub
                instances.append(inst)
    elif name in _SUITES:
        instances = _SUITES[name](options)
    else:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    ok = all(inst.get("pass", False) for inst in instances)
    return {"suite": name, "instances": instances, "ok": ok}
