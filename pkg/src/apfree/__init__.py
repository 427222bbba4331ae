"""Exact-arithmetic toolkit for destroying 3-term arithmetic progressions
in nowhere-dense subsets of [0,1] via piecewise-linear homeomorphisms,
with independently verifiable certificates."""

from .anchors import PointConfig, defect, pick_apfree, stanley_points
from .apsearch import (APWitness, DefectReport, ap_witness_long,
                       brute_force_ap3, has_ap3, min_defect, stability_radius)
from .builder import (CERTIFICATE_SCHEMA, FapCertificate, PartitionPlan,
                      StageCertificate, VerificationReport, build_fap,
                      destroy_step, in_H_eps, rap_demo, verify_certificate)
from .errors import (MalformedInput, RefinementExhausted, ScheduleInfeasible,
                     VacuousDefect, VerificationFailed)
from .homeo import PLHomeo
from .intervals import ClosedInterval, IntervalUnion, parse_rat, rat_str
from .ndsets import CantorGen, NDGenerator, PointsGen, UnionGen
from .report import plot_rows, render_figure, write_plot_csv

__version__ = "0.1.0"

__all__ = [
    "APWitness", "CERTIFICATE_SCHEMA", "CantorGen", "ClosedInterval",
    "DefectReport", "FapCertificate", "IntervalUnion", "MalformedInput",
    "NDGenerator", "PLHomeo", "PartitionPlan", "PointConfig", "PointsGen",
    "RefinementExhausted", "ScheduleInfeasible", "StageCertificate",
    "UnionGen", "VacuousDefect", "VerificationFailed", "VerificationReport",
    "ap_witness_long", "brute_force_ap3", "build_fap", "defect",
    "destroy_step", "has_ap3", "in_H_eps", "min_defect", "parse_rat",
    "pick_apfree", "plot_rows", "rap_demo", "rat_str", "render_figure",
    "stability_radius", "stanley_points", "verify_certificate",
    "write_plot_csv",
]
