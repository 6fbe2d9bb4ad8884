"""Boundary-eigenvalue classification and certification.

Each eigenpair is scored against the sampled numerical-range hull and
against two independent certificates:

  normality:    a boundary eigenvalue of any operator forces the eigenvector
                into the kernel of the adjoint pencil, so
                ||A* f - conj(lambda) f|| must vanish;
  Re/Im split:  equivalently the eigenvector must satisfy both hermitian
                eigenproblems Re(A) f = Re(lambda) f and Im(A) f = Im(lambda) f,
                and for assembled lattice operators Im(A) is the diagonal
                Im d, which pins Im d(k) = Im(lambda) on the support.

Interior eigenvalues get verdict not_applicable.  A boundary pair whose
normality residual exceeds the certification threshold is "violated";
residuals an order of magnitude above threshold are the typical signature
of a truncation artifact rather than a genuine boundary eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import Tolerances, DEFAULT_TOLERANCES
from .exceptions import EmptySupportError, ProvenanceError
from .linalg import EigenPair, eig_general
from .model import LatticeBox, OperatorMatrix
from .numrange import NumericalRangeHull


class NormalityVerdict(str, Enum):
    CERTIFIED_NORMAL = "certified_normal"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not_applicable"


class SplitVerdict(str, Enum):
    CERTIFIED = "certified"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class EigenClassification:
    pair: EigenPair
    boundary_distance: float
    is_boundary: bool
    normality_residual: float
    split_residual_re: float
    split_residual_im: float
    support_indices: np.ndarray
    box: LatticeBox | None

    @property
    def support_set(self) -> list[tuple[int, ...]]:
        if self.box is None:
            return [(int(i),) for i in self.support_indices]
        return [self.box.index_site(int(i)) for i in self.support_indices]


def classify(op: OperatorMatrix, hull: NumericalRangeHull,
             tol: Tolerances = DEFAULT_TOLERANCES) -> list[EigenClassification]:
    """One record per eig_general pair, in the same (Re, Im) order.

    The hull must have been computed from the same operator; the sampled
    minimum margin is the boundary distance (see numrange module notes on
    its direction of error).
    """
    a = op.matrix
    h = (a + a.conj().T) / 2.0
    k = (a - a.conj().T) / 2.0j
    frob = op.frobenius
    tol_boundary = tol.boundary(frob)
    box = op.provenance.box if op.provenance is not None else None
    out = []
    for pair in eig_general(op, tol):
        lam, f = pair.value, pair.vector
        dist = hull.boundary_distance(lam, outside_tol=tol_boundary)
        normality = float(np.linalg.norm(a.conj().T @ f - np.conj(lam) * f))
        split_re = float(np.linalg.norm(h @ f - lam.real * f))
        split_im = float(np.linalg.norm(k @ f - lam.imag * f))
        thresh = tol.support_rel * float(np.abs(f).max())
        support = np.flatnonzero(np.abs(f) > thresh)
        out.append(EigenClassification(
            pair=pair,
            boundary_distance=dist,
            is_boundary=dist <= tol_boundary,
            normality_residual=normality,
            split_residual_re=split_re,
            split_residual_im=split_im,
            support_indices=support,
            box=box,
        ))
    return out


def hildebrandt_certificate(op: OperatorMatrix, cls: EigenClassification,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> NormalityVerdict:
    """Normality certificate for a boundary eigenpair.

    certified_normal iff boundary and normality residual <= tol_cert;
    any larger residual on the boundary is a violation (values beyond
    10x the threshold indicate a truncation artifact); interior pairs
    are not_applicable.
    """
    if not cls.is_boundary:
        return NormalityVerdict.NOT_APPLICABLE
    if cls.normality_residual <= tol.cert(op.frobenius):
        return NormalityVerdict.CERTIFIED_NORMAL
    return NormalityVerdict.VIOLATED


def split_certificate(op: OperatorMatrix, cls: EigenClassification,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> SplitVerdict:
    """Re/Im eigen-equation split certificate for a boundary eigenpair.

    Requires assembly provenance: on top of the two split residuals, the
    diagonal structure of Im(A) is checked sitewise, |Im d(k) - Im lambda|
    <= tol_cert for every support site k.
    """
    if op.provenance is None:
        raise ProvenanceError(
            "split certificate needs assembly provenance (box + potential)",
            where="boundary_classifier.split_certificate",
        )
    if not cls.is_boundary:
        return SplitVerdict.NOT_APPLICABLE
    bound = tol.cert(op.frobenius)
    if cls.split_residual_re > bound or cls.split_residual_im > bound:
        return SplitVerdict.VIOLATED
    box = op.provenance.box
    potential = op.provenance.potential
    if len(cls.support_indices):
        sites = box.sites[cls.support_indices]
        imvals = potential.values(sites).imag
        if float(np.abs(imvals - cls.pair.value.imag).max()) > bound:
            return SplitVerdict.VIOLATED
    return SplitVerdict.CERTIFIED


def support_extent(cls: EigenClassification, axis: int) -> tuple[int, int]:
    """Min and max coordinate of the thresholded support along one axis."""
    if len(cls.support_indices) == 0:
        raise EmptySupportError(
            "support set is empty at the configured threshold",
            where="boundary_classifier.support_extent",
        )
    if cls.box is None:
        raise ProvenanceError(
            "support extent needs assembly provenance",
            where="boundary_classifier.support_extent",
        )
    if not 0 <= axis < cls.box.nu:
        raise ValueError(f"axis {axis} out of range for nu={cls.box.nu}")
    coords = cls.box.sites[cls.support_indices, axis]
    return int(coords.min()), int(coords.max())


def box_limited(cls: EigenClassification) -> bool:
    """True when the thresholded support is strictly interior to the box on
    every axis.  Genuine eigenfunctions of the infinite operator have support
    reaching arbitrarily far in every coordinate direction, so an interior
    extent flags the vector as shaped by the truncation (or by thresholding
    of fast-decaying tails); reported to aid artifact triage."""
    if cls.box is None or len(cls.support_indices) == 0:
        return False
    for axis in range(cls.box.nu):
        lo, hi = support_extent(cls, axis)
        blo, bhi = cls.box.ranges[axis]
        if lo <= blo or hi >= bhi:
            return False
    return True
