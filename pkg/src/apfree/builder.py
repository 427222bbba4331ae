"""Constructive core: the single destruction step, its stability accounting,
and the multi-stage scheduler with machine-checkable certificates.

One step takes an increasing PL map f, a cover generator, and a step
threshold eps, and returns a nearby map g (within eps in sup norm) whose
image of the cover contains no 3-term AP of step >= eps.  The scheduler
chains steps with a geometric perturbation budget so that every earlier
stage's guarantee survives all later perturbations, and re-verifies each
guarantee directly on the final map.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .anchors import PointConfig, pick_apfree
from .apsearch import has_ap3, min_defect
from .errors import (MalformedInput, RefinementExhausted, ScheduleInfeasible,
                     VacuousDefect, VerificationFailed)
from .homeo import PLHomeo
from .intervals import ONE, ZERO, ClosedInterval, IntervalUnion, parse_rat, rat_str
from .ndsets import NDGenerator, UnionGen

CERTIFICATE_SCHEMA = "apfree.fap-certificate/1"

DEFAULT_MIN_EPS = Fraction(1, 2**64)


@dataclass(frozen=True)
class PartitionPlan:
    """Everything chosen inside one destruction step.

    r == 0 marks the shortcut branch (the input map already qualified and
    nothing was partitioned)."""
    r: int
    cuts: tuple[Fraction, ...]
    cells: tuple[ClosedInterval, ...]
    anchors: Optional[PointConfig]
    targets: tuple[ClosedInterval, ...]
    contraction: PLHomeo

    @classmethod
    def trivial(cls) -> "PartitionPlan":
        return cls(0, (ZERO, ONE), (), None, (), PLHomeo.identity())


@dataclass(frozen=True)
class StageCertificate:
    stage: int
    eps_requested: Fraction
    eps_effective: Fraction
    cover_generation: int
    gamma: Optional[Fraction]
    delta_stability: Fraction
    perturbation_used: Fraction
    verified: bool

    def to_jsonable(self) -> dict:
        return {
            "stage": self.stage,
            "eps_requested": rat_str(self.eps_requested),
            "eps_effective": rat_str(self.eps_effective),
            "cover_generation": self.cover_generation,
            "gamma": None if self.gamma is None else rat_str(self.gamma),
            "delta_stability": rat_str(self.delta_stability),
            "perturbation_used": rat_str(self.perturbation_used),
            "verified": self.verified,
        }

    @classmethod
    def from_jsonable(cls, data) -> "StageCertificate":
        return cls(
            stage=int(data["stage"]),
            eps_requested=parse_rat(data["eps_requested"]),
            eps_effective=parse_rat(data["eps_effective"]),
            cover_generation=int(data["cover_generation"]),
            gamma=None if data["gamma"] is None else parse_rat(data["gamma"]),
            delta_stability=parse_rat(data["delta_stability"]),
            perturbation_used=parse_rat(data["perturbation_used"]),
            verified=bool(data["verified"]),
        )


@dataclass(frozen=True)
class FapCertificate:
    stages: tuple[StageCertificate, ...]
    final_homeo: PLHomeo
    guarantees: tuple[dict, ...]
    budget_ledger: tuple[dict, ...]

    def to_jsonable(self) -> dict:
        return {
            "schema": CERTIFICATE_SCHEMA,
            "stages": [s.to_jsonable() for s in self.stages],
            "final_homeo": self.final_homeo.to_jsonable(),
            "guarantees": list(self.guarantees),
            "budget_ledger": list(self.budget_ledger),
        }

    @classmethod
    def from_jsonable(cls, data) -> "FapCertificate":
        if not isinstance(data, dict) or data.get("schema") != CERTIFICATE_SCHEMA:
            raise MalformedInput(f"expected schema {CERTIFICATE_SCHEMA}")
        return cls(
            stages=tuple(StageCertificate.from_jsonable(s) for s in data["stages"]),
            final_homeo=PLHomeo.from_jsonable(data["final_homeo"]),
            guarantees=tuple(data["guarantees"]),
            budget_ledger=tuple(data["budget_ledger"]),
        )


def _gamma_delta(image: IntervalUnion, eps: Fraction):
    try:
        gamma = min_defect(image, eps).gamma
        return gamma, min(eps / 2, gamma / 5)
    except VacuousDefect:
        return None, eps / 2


def destroy_step(f: PLHomeo, gen: NDGenerator, eps: Fraction,
                 max_gen: int) -> tuple[PLHomeo, PartitionPlan, StageCertificate]:
    """One destruction step: g with sup_dist(g, f) < eps whose image of the
    cover (at the chosen generation) has no 3-term AP of step >= eps."""
    eps = Fraction(eps)
    if not (0 < eps < Fraction(1, 2)):
        raise MalformedInput("eps must lie strictly between 0 and 1/2")

    # shortcut: the coarsest cover may already qualify
    img0 = f.image(gen.cover(0))
    if has_ap3(img0, eps) is None:
        gamma, delta = _gamma_delta(img0, eps)
        cert = StageCertificate(0, eps, eps, 0, gamma, delta, ZERO, True)
        return f, PartitionPlan.trivial(), cert

    r = max(3, int(1 / eps) + 2)
    slack = (eps - Fraction(1, r)) / 2
    # shrink nominally so every piece of the partition is strictly shorter
    # than eps
    slack_eff = slack * Fraction(15, 16)
    windows = [ClosedInterval(Fraction(k, r) - slack_eff, Fraction(k, r) + slack_eff)
               for k in range(1, r)]

    chosen: Optional[int] = None
    interior_cuts: list[Fraction] = []
    img = img0
    for g in range(max_gen + 1):
        img = f.image(gen.cover(g))
        interior_cuts = []
        for w in windows:
            p = img.gap_point_in(w)
            if p is None:
                break
            interior_cuts.append(p)
        if len(interior_cuts) == len(windows):
            chosen = g
            break
    if chosen is None:
        raise RefinementExhausted(
            f"no generation <= {max_gen} exposes image gaps near all cuts for eps={eps}")

    cuts = [ZERO, *interior_cuts, ONE]

    cells: list[ClosedInterval] = []
    for k in range(1, r + 1):
        lo_cut, hi_cut = cuts[k - 1], cuts[k]
        part = img.clip(ClosedInterval(lo_cut, hi_cut))
        if part:
            a, b = part.hull()
            left = a - (a - lo_cut) / 2
            right = b + (hi_cut - b) / 2
        else:
            center = (lo_cut + hi_cut) / 2
            half = (hi_cut - lo_cut) / 16
            left, right = center - half, center + half
        if k == 1:
            left = ZERO
        if k == r:
            right = ONE
        cells.append(ClosedInterval(left, right))

    anchors = pick_apfree(cells)
    delta_p = anchors.defect

    targets: list[ClosedInterval] = []
    for k, (cell, p) in enumerate(zip(cells, anchors.points), start=1):
        t = min(delta_p / 8, cell.length / 2)
        if k == 1:
            z = ClosedInterval(ZERO, t)
        elif k == r:
            z = ClosedInterval(ONE - t, ONE)
        else:
            z = ClosedInterval(max(cell.lo, p - t / 2), min(cell.hi, p + t / 2))
        targets.append(z)

    bps: list[tuple[Fraction, Fraction]] = []
    for cell, z in zip(cells, targets):
        bps.append((cell.lo, z.lo))
        bps.append((cell.hi, z.hi))
    contraction = PLHomeo(bps)

    dist = contraction.sup_dist(PLHomeo.identity())
    if not dist < eps:
        raise VerificationFailed(f"contraction moved points by {dist} >= eps={eps}")

    g_new = contraction.compose(f)
    new_img = g_new.image(gen.cover(chosen))
    witness = has_ap3(new_img, eps)
    if witness is not None:
        raise VerificationFailed(f"image still contains an AP: {witness}")

    gamma, delta = _gamma_delta(new_img, eps)
    plan = PartitionPlan(r, tuple(cuts), tuple(cells), anchors,
                         tuple(targets), contraction)
    cert = StageCertificate(0, eps, eps, chosen, gamma, delta, dist, True)
    return g_new, plan, cert


def in_H_eps(phi: PLHomeo, gen: NDGenerator, g: int, eps: Fraction) -> bool:
    """Membership at cover level: the image of the generation-g cover has no
    3-term AP of step >= eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise MalformedInput("eps must be positive")
    return has_ap3(phi.image(gen.cover(g)), eps) is None


def _nested_union(gens: Sequence[NDGenerator], k: int,
                  cache: dict) -> NDGenerator:
    count = min(k, len(gens))
    if count not in cache:
        cache[count] = gens[0] if count == 1 else UnionGen(tuple(gens[:count]))
    return cache[count]


def build_fap(gens: Sequence[NDGenerator], stages: int,
              eps_schedule: Optional[Sequence[Fraction]] = None,
              max_gen: int = 64,
              min_eps: Fraction = DEFAULT_MIN_EPS) -> FapCertificate:
    """Chain destruction steps over the nested unions of the generators.

    Stage k handles the union of the first min(k, len(gens)) generators at
    an effective threshold small enough that all later perturbations stay
    inside every earlier stage's stability radius (geometric split, half
    the radius held in reserve).  Each stage's guarantee is re-verified
    directly on the final map before the certificate is emitted.
    """
    if not gens:
        raise MalformedInput("need at least one generator")
    if stages < 1:
        raise MalformedInput("need at least one stage")
    if eps_schedule is not None:
        eps_schedule = [Fraction(e) for e in eps_schedule]
        if len(eps_schedule) < stages:
            raise MalformedInput("eps schedule shorter than the stage count")
        if any(not (0 < e < Fraction(1, 2)) for e in eps_schedule):
            raise MalformedInput("eps schedule entries must lie in (0, 1/2)")

    phi = PLHomeo.identity()
    union_cache: dict = {}
    certs: list[StageCertificate] = []
    for k in range(1, stages + 1):
        target = (eps_schedule[k - 1] if eps_schedule is not None
                  else Fraction(1, 2 ** (k + 1)))
        eps_eff = target
        for j, prior in enumerate(certs, start=1):
            eps_eff = min(eps_eff, prior.delta_stability * Fraction(1, 2 ** (k - j + 1)))
        if eps_eff < min_eps:
            raise ScheduleInfeasible(
                f"stage {k}: effective eps {eps_eff} fell below the minimum {min_eps}")
        u_k = _nested_union(gens, k, union_cache)
        phi, _plan, cert = destroy_step(phi, u_k, eps_eff, max_gen)
        certs.append(dataclasses.replace(cert, stage=k, eps_requested=target))

    guarantees: list[dict] = []
    for cert in certs:
        u_k = _nested_union(gens, cert.stage, union_cache)
        bound = 2 * cert.eps_effective
        img = phi.image(u_k.cover(cert.cover_generation))
        witness = has_ap3(img, bound, strict=True)
        if witness is not None:
            raise VerificationFailed(
                f"stage {cert.stage} guarantee failed on the final map: {witness}")
        guarantees.append({
            "stage": cert.stage,
            "generator": u_k.to_config(),
            "cover_generation": cert.cover_generation,
            "step_bound": rat_str(bound),
            "strict": True,
        })

    ledger: list[dict] = []
    for i, cert in enumerate(certs):
        future = sum((c.eps_effective for c in certs[i + 1:]), Fraction(0))
        if not future < cert.delta_stability:
            raise VerificationFailed(
                f"stage {cert.stage}: future perturbations {future} exceed "
                f"stability radius {cert.delta_stability}")
        ledger.append({
            "stage": cert.stage,
            "delta_stability": rat_str(cert.delta_stability),
            "future_spend": rat_str(future),
        })

    return FapCertificate(tuple(certs), phi, tuple(guarantees), tuple(ledger))


@dataclass
class VerificationReport:
    ok: bool
    failure: Optional[str] = None

    def __bool__(self):
        return self.ok


def verify_certificate(cert: FapCertificate,
                       gens: Sequence[NDGenerator]) -> VerificationReport:
    """Independent replay: recompute covers, images under the final map,
    the AP checks behind every guarantee, the stability-radius formula,
    and the budget ledger.  Stops at the first failing check."""

    def fail(msg: str) -> VerificationReport:
        return VerificationReport(False, msg)

    if not cert.stages:
        return fail("certificate has no stages")
    union_cache: dict = {}
    half = Fraction(1, 2)
    for cert_k in cert.stages:
        e = cert_k.eps_effective
        if not (0 < e < half):
            return fail(f"stage {cert_k.stage}: eps_effective {e} outside (0, 1/2)")
        if e > cert_k.eps_requested:
            return fail(f"stage {cert_k.stage}: effective eps exceeds the request")
        if not cert_k.perturbation_used < e:
            return fail(f"stage {cert_k.stage}: perturbation {cert_k.perturbation_used} "
                        f"not below eps {e}")
        if cert_k.gamma is None:
            expected = e / 2
        else:
            if cert_k.gamma <= 0:
                return fail(f"stage {cert_k.stage}: gamma must be positive")
            expected = min(e / 2, cert_k.gamma / 5)
        if cert_k.delta_stability != expected:
            return fail(f"stage {cert_k.stage}: delta_stability "
                        f"{cert_k.delta_stability} != {expected}")

    certs = cert.stages
    for i, cert_k in enumerate(certs):
        future = sum((c.eps_effective for c in certs[i + 1:]), Fraction(0))
        if not future < cert_k.delta_stability:
            return fail(f"stage {cert_k.stage}: ledger inequality violated "
                        f"({future} >= {cert_k.delta_stability})")
        entry = cert.budget_ledger[i] if i < len(cert.budget_ledger) else None
        if (entry is None or entry.get("stage") != cert_k.stage
                or parse_rat(entry["delta_stability"]) != cert_k.delta_stability
                or parse_rat(entry["future_spend"]) != future):
            return fail(f"stage {cert_k.stage}: budget ledger entry inconsistent")

    if len(cert.guarantees) != len(certs):
        return fail("one guarantee per stage expected")
    for cert_k, guar in zip(certs, cert.guarantees):
        if guar.get("stage") != cert_k.stage or not guar.get("strict"):
            return fail(f"stage {cert_k.stage}: malformed guarantee entry")
        if parse_rat(guar["step_bound"]) != 2 * cert_k.eps_effective:
            return fail(f"stage {cert_k.stage}: guarantee bound is not twice eps")
        if int(guar["cover_generation"]) != cert_k.cover_generation:
            return fail(f"stage {cert_k.stage}: guarantee generation mismatch")
        u_k = _nested_union(gens, cert_k.stage, union_cache)
        if u_k.to_config() != guar["generator"]:
            return fail(f"stage {cert_k.stage}: generator config mismatch")
        img = cert.final_homeo.image(u_k.cover(cert_k.cover_generation))
        witness = has_ap3(img, 2 * cert_k.eps_effective, strict=True)
        if witness is not None:
            return fail(f"stage {cert_k.stage}: image contains AP {witness.terms()} "
                        f"of step {witness.step}")
    return VerificationReport(True)


def rap_demo(union: IntervalUnion, phi: PLHomeo, n: int):
    """The other branch of the dichotomy: positive measure survives any
    increasing homeomorphism, so a length-n AP always exists in the image."""
    if union.measure() == 0:
        raise MalformedInput("rap_demo needs a set of positive measure")
    from .apsearch import ap_witness_long
    witness = ap_witness_long(phi.image(union), n)
    assert witness is not None  # increasing maps preserve positive measure
    return witness
