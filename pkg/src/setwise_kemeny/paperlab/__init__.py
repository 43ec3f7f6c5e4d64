"""Published elections, constructions and tables, re-derived."""

from __future__ import annotations

from .instances import (
    CheckResult,
    Claim,
    PaperInstance,
    asset_text,
    get_instance,
    instance_catalog,
    instance_ids,
    load_profile,
    majority_example,
    min_duel_ratio,
)
from .tables import verify_threshold_tables
from .two_thirds import (
    LIMITATION,
    SwapReport,
    chain_forced,
    duel_ratio_bound,
    gen_two_thirds_construction,
    t_min_duel_ratio,
    verify_two_thirds_local_swaps,
)

TWO_THIRDS_SIZES = (33, 40, 50)


def verify_two_thirds(sizes=TWO_THIRDS_SIZES, samples: int = 10_000, seed: int = 0) -> list[CheckResult]:
    out = []
    for n in sizes:
        p = gen_two_thirds_construction(n)
        group = f"TWO_THIRDS(n={n})"
        ratio = t_min_duel_ratio(p)
        out.append(
            CheckResult(group, "t min duel ratio", "in at least 2n-8 out of 3n-8 votes", duel_ratio_bound(n), ratio, ratio == duel_ratio_bound(n))
        )
        forced = chain_forced(p)
        out.append(CheckResult(group, "u-chain and p-tail forced by 3-wise unanimity", "u1 > ... > un > p1 > p2 > p3", True, forced, forced))
        rep = verify_two_thirds_local_swaps(p, samples, seed)
        out.append(
            CheckResult(
                group,
                f"u_i/s swap improves ({samples} samples)",
                "Delta <= 32 - n < 0",
                f"max delta <= {rep.shape1_bound}",
                f"max delta {rep.shape1_max_delta}",
                rep.shape1_nonnegative == 0 and rep.shape1_over_bound == 0,
            )
        )
        out.append(
            CheckResult(
                group,
                f"z/predecessor swap improves ({samples} samples)",
                "delta <= n - 8 - n - 40 = -48",
                f"max delta <= {rep.shape2_bound}",
                f"max delta {rep.shape2_max_delta}",
                rep.shape2_nonnegative == 0 and rep.shape2_over_bound == 0,
                LIMITATION,
            )
        )
    return out


def verify_paper(instance: str | None = None, samples: int = 10_000, seed: int = 0) -> list[CheckResult]:
    """Every check, or only those of one instance id (or TABLES / TWO_THIRDS)."""
    key = None if instance is None else instance.upper().replace("-", "_")
    out = []
    for inst in instance_catalog():
        if key in (None, inst.id):
            out.extend(inst.verify())
    if key in (None, "TABLES"):
        out.extend(verify_threshold_tables())
    if key in (None, "TWO_THIRDS"):
        out.extend(verify_two_thirds(samples=samples, seed=seed))
    if not out:
        known = ", ".join([*instance_ids(), "TABLES", "TWO_THIRDS"])
        raise KeyError(f"unknown instance {instance!r}; known: {known}")
    return out


__all__ = [
    "CheckResult",
    "Claim",
    "LIMITATION",
    "PaperInstance",
    "SwapReport",
    "asset_text",
    "gen_two_thirds_construction",
    "get_instance",
    "instance_catalog",
    "instance_ids",
    "load_profile",
    "majority_example",
    "min_duel_ratio",
    "verify_paper",
    "verify_threshold_tables",
    "verify_two_thirds",
    "verify_two_thirds_local_swaps",
]
