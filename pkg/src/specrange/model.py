"""Lattice boxes, complex potentials, and assembly of truncated lattice operators.

The operator of interest is nearest-neighbor hopping on Z^nu plus a complex
diagonal potential, cut down to a finite box with Dirichlet truncation
(hops leaving the box are dropped).  Potentials are specified symbolically
so that infinite-lattice facts (decay, level-set structure, parity of the
imaginary part's support) remain certifiable after truncation; each kind
implements a small certificate protocol consumed by the criteria module.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import DEFAULT_MAX_DIM
from .exceptions import DimensionLimitError

Site = tuple | tuple[int, ...]


# ---------------------------------------------------------------------------
# lattice box


@dataclass(frozen=True)
class LatticeBox:
    """Axis-aligned box in Z^nu with lexicographic site enumeration.

    ranges[j] = (lo_j, hi_j) inclusive on both ends.  Enumeration order is
    lexicographic in the coordinates, first axis most significant, which
    fixes the site <-> index bijection used everywhere downstream.
    """

    nu: int
    ranges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "ranges", tuple((int(lo), int(hi)) for lo, hi in self.ranges))
        if self.nu < 1:
            raise ValueError("nu must be >= 1")
        if len(self.ranges) != self.nu:
            raise ValueError(f"expected {self.nu} ranges, got {len(self.ranges)}")
        for lo, hi in self.ranges:
            if lo > hi:
                raise ValueError(f"empty axis range ({lo}, {hi})")

    @cached_property
    def shape(self) -> tuple[int, ...]:
        return tuple(hi - lo + 1 for lo, hi in self.ranges)

    @cached_property
    def site_count(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))

    @cached_property
    def strides(self) -> tuple[int, ...]:
        strides = [1] * self.nu
        for j in range(self.nu - 2, -1, -1):
            strides[j] = strides[j + 1] * self.shape[j + 1]
        return tuple(strides)

    def site_index(self, site: Sequence[int]) -> int:
        if len(site) != self.nu:
            raise ValueError(f"site has {len(site)} coordinates, box has nu={self.nu}")
        idx = 0
        for k, (lo, hi), s in zip(site, self.ranges, self.strides):
            k = int(k)
            if not lo <= k <= hi:
                raise ValueError(f"site {tuple(site)} outside box")
            idx += (k - lo) * s
        return idx

    def index_site(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.site_count:
            raise ValueError("index out of range")
        out = []
        for (lo, _), s in zip(self.ranges, self.strides):
            out.append(lo + index // s)
            index %= s
        return tuple(out)

    @cached_property
    def sites(self) -> np.ndarray:
        """(site_count, nu) int64 array in enumeration order."""
        axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in self.ranges]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def contains_site(self, site: Sequence[int]) -> bool:
        return len(site) == self.nu and all(
            lo <= int(k) <= hi for k, (lo, hi) in zip(site, self.ranges)
        )


# ---------------------------------------------------------------------------
# decay certificates


@dataclass(frozen=True)
class DecayBound:
    """Monotone envelope g(s) decreasing to 0, bounding a tail deviation.

    form "power":      g(s) = amplitude / (1 + s**rate)
    form "geometric":  g(s) = amplitude * rate**s      (0 <= rate < 1)
    """

    form: str
    amplitude: float
    rate: float

    def at(self, s: float) -> float:
        if self.amplitude == 0.0:
            return 0.0
        if self.form == "power":
            return self.amplitude / (1.0 + s ** self.rate)
        return self.amplitude * self.rate ** s

    def weighted_sum_finite(self) -> bool:
        """Whether sum_s s * g(s) converges (1D moment condition)."""
        if self.amplitude == 0.0:
            return True
        if self.form == "power":
            return self.rate > 2.0
        return True  # geometric with rate < 1


def _dev(form: str, amplitude: float, rate: float) -> tuple[DecayBound, ...]:
    if amplitude == 0.0:
        return ()
    return (DecayBound(form, float(amplitude), float(rate)),)


@dataclass(frozen=True)
class TailInfo:
    """Certified tail model: for ||k||_1 > radius, d(k) = base + dev(k)
    with |Re dev| and |Im dev| below the respective envelopes.  Empty
    envelope tuples mean the tail is exact (d == base outside the radius).
    """

    radius: int
    base: complex
    re_dev: tuple[DecayBound, ...] = ()
    im_dev: tuple[DecayBound, ...] = ()

    @property
    def exact(self) -> bool:
        return not self.re_dev and not self.im_dev

    def re_sup_beyond(self, s: float) -> float:
        return sum(b.at(s) for b in self.re_dev)

    def im_sup_beyond(self, s: float) -> float:
        return sum(b.at(s) for b in self.im_dev)


# ---------------------------------------------------------------------------
# potential kinds


def _norm1(sites: np.ndarray) -> np.ndarray:
    return np.abs(sites).sum(axis=1)


def _hull4(
    values: Iterable[complex],
) -> tuple[float, float, float, float]:
    vs = list(values)
    re = [v.real for v in vs]
    im = [v.imag for v in vs]
    return (min(re), max(re), min(im), max(im))


class PotentialSpec(abc.ABC):
    """Symbolic complex potential d on Z^nu.

    Subclasses provide pointwise evaluation plus the certificate protocol
    used by the absence criteria; every certificate method is conservative
    (returns the weaker answer when the structure cannot be established
    from the declared kind alone).
    """

    kind: str = ""

    @abc.abstractmethod
    def values(self, sites: np.ndarray) -> np.ndarray:
        """Evaluate on an (m, nu) int array of sites; returns complex128 (m,)."""

    def value(self, site: Sequence[int]) -> complex:
        return complex(self.values(np.asarray([site], dtype=np.int64))[0])

    @abc.abstractmethod
    def sup_abs(self) -> float:
        """Finite upper bound for sup_k |d(k)| over all of Z^nu."""

    @abc.abstractmethod
    def global_range(self) -> tuple[float, float, float, float]:
        """(Rmin, Rmax, Imin, Imax) containing Re d and Im d over all of Z^nu."""

    # --- certificate protocol (conservative defaults) ---

    def tail_info(self) -> TailInfo | None:
        return None

    def im_alternating(self) -> tuple[float, float] | None:
        """Exact global 2-periodic imaginary part (value on even, on odd), 1D."""
        return None

    def im_support_parity(self) -> str | None:
        """'even'/'odd' if Im d vanishes off that parity class, 'zero' if
        Im d is identically zero, None if unconstrained.  1D notion."""
        return None

    def im_nonzero_infinite(self) -> bool:
        """Certified: Im d(k) != 0 at infinitely many sites."""
        return False

    def re_weighted_summable(self) -> bool:
        """Certified: sum_k |k| |Re d(k)| < infinity (1D)."""
        return False

    def re_decays_to_zero(self) -> bool:
        t = self.tail_info()
        return t is not None and t.base.real == 0.0

    def im_decays_to_zero(self) -> bool:
        t = self.tail_info()
        return t is not None and t.base.imag == 0.0


def _parity_mask(sites: np.ndarray, parity: str | None) -> np.ndarray | None:
    if parity is None:
        return None
    rem = 0 if parity == "even" else 1
    return (np.mod(sites[:, 0], 2) == rem)


@dataclass(frozen=True)
class TablePotential(PotentialSpec):
    """Finite table of site -> complex values; identically zero elsewhere."""

    entries: tuple[tuple[tuple[int, ...], complex], ...]
    kind: str = field(default="table", init=False)

    def __post_init__(self):
        raw = self.entries.items() if isinstance(self.entries, dict) else self.entries
        norm = tuple(
            (tuple(int(c) for c in site), complex(v)) for site, v in raw
        )
        norm = tuple(sorted(norm, key=lambda e: e[0]))
        seen = set()
        for site, _ in norm:
            if site in seen:
                raise ValueError(f"duplicate table site {site}")
            seen.add(site)
        object.__setattr__(self, "entries", norm)

    @cached_property
    def _map(self) -> dict[tuple[int, ...], complex]:
        return dict(self.entries)

    @cached_property
    def support_radius(self) -> int:
        if not self.entries:
            return 0
        return max(sum(abs(c) for c in site) for site, v in self.entries if v != 0)

    def values(self, sites: np.ndarray) -> np.ndarray:
        m = self._map
        return np.array([m.get(tuple(int(c) for c in s), 0.0) for s in sites],
                        dtype=np.complex128)

    def sup_abs(self) -> float:
        return max((abs(v) for _, v in self.entries), default=0.0)

    def global_range(self):
        return _hull4([0j] + [v for _, v in self.entries])

    def tail_info(self):
        return TailInfo(radius=self.support_radius, base=0j)

    def im_support_parity(self):
        im_sites = [site for site, v in self.entries if v.imag != 0.0]
        if not im_sites:
            return "zero"
        if any(len(site) != 1 for site in im_sites):
            return None
        pars = {site[0] % 2 for site in im_sites}
        if pars == {0}:
            return "even"
        if pars == {1}:
            return "odd"
        return None

    def re_weighted_summable(self):
        return True


@dataclass(frozen=True)
class ConstantPotential(PotentialSpec):
    c: complex
    kind: str = field(default="constant", init=False)

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))

    def values(self, sites):
        return np.full(len(sites), self.c, dtype=np.complex128)

    def sup_abs(self):
        return abs(self.c)

    def global_range(self):
        return (self.c.real, self.c.real, self.c.imag, self.c.imag)

    def tail_info(self):
        return TailInfo(radius=0, base=self.c)

    def im_support_parity(self):
        return "zero" if self.c.imag == 0.0 else None

    def im_nonzero_infinite(self):
        return self.c.imag != 0.0

    def re_weighted_summable(self):
        return self.c.real == 0.0


def _check_parity(parity):
    if parity not in (None, "even", "odd"):
        raise ValueError(f"parity must be 'even', 'odd' or None, got {parity!r}")


@dataclass(frozen=True)
class PowerDecayPotential(PotentialSpec):
    """d(k) = amplitude / (1 + ||k||_1**exponent), optionally masked to one
    parity class of the first coordinate (zero on the other class)."""

    amplitude: complex
    exponent: float
    parity: str | None = None
    kind: str = field(default="decay_power", init=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        object.__setattr__(self, "exponent", float(self.exponent))
        if self.exponent <= 0:
            raise ValueError("exponent must be positive")
        _check_parity(self.parity)

    def values(self, sites):
        out = self.amplitude / (1.0 + _norm1(sites).astype(np.float64) ** self.exponent)
        mask = _parity_mask(sites, self.parity)
        if mask is not None:
            out = np.where(mask, out, 0.0)
        return out.astype(np.complex128)

    def sup_abs(self):
        return abs(self.amplitude)

    def global_range(self):
        a = self.amplitude
        return (min(0.0, a.real), max(0.0, a.real), min(0.0, a.imag), max(0.0, a.imag))

    def tail_info(self):
        a = self.amplitude
        return TailInfo(
            radius=0,
            base=0j,
            re_dev=_dev("power", abs(a.real), self.exponent),
            im_dev=_dev("power", abs(a.imag), self.exponent),
        )

    def im_support_parity(self):
        if self.amplitude.imag == 0.0:
            return "zero"
        return self.parity

    def im_nonzero_infinite(self):
        return self.amplitude.imag != 0.0

    def re_weighted_summable(self):
        return self.amplitude.real == 0.0 or self.exponent > 2.0


@dataclass(frozen=True)
class GeometricDecayPotential(PotentialSpec):
    """d(k) = amplitude * ratio**||k||_1 with |ratio| < 1, optional parity mask."""

    amplitude: complex
    ratio: float
    parity: str | None = None
    kind: str = field(default="decay_geometric", init=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        object.__setattr__(self, "ratio", float(self.ratio))
        if not abs(self.ratio) < 1.0:
            raise ValueError("|ratio| must be < 1")
        _check_parity(self.parity)

    def values(self, sites):
        out = self.amplitude * np.power(self.ratio, _norm1(sites).astype(np.float64))
        mask = _parity_mask(sites, self.parity)
        if mask is not None:
            out = np.where(mask, out, 0.0)
        return out.astype(np.complex128)

    def sup_abs(self):
        return abs(self.amplitude)

    def global_range(self):
        a, r = self.amplitude, self.ratio
        # ratio < 0 alternates sign with ||k||_1; hull over {a r^s : s >= 0} U {0}
        vals = [0j, a, a * r]
        return _hull4(vals)

    def tail_info(self):
        a, r = self.amplitude, abs(self.ratio)
        return TailInfo(
            radius=0,
            base=0j,
            re_dev=_dev("geometric", abs(a.real), r),
            im_dev=_dev("geometric", abs(a.imag), r),
        )

    def im_support_parity(self):
        if self.amplitude.imag == 0.0:
            return "zero"
        return self.parity

    def im_nonzero_infinite(self):
        return self.amplitude.imag != 0.0

    def re_weighted_summable(self):
        return True


@dataclass(frozen=True)
class Alternating1DPotential(PotentialSpec):
    """Purely imaginary 2-periodic potential on Z: Im d(n) = b_even on even n,
    b_odd on odd n; real part identically zero."""

    b_even: float
    b_odd: float
    kind: str = field(default="alternating_1d", init=False)

    def __post_init__(self):
        object.__setattr__(self, "b_even", float(self.b_even))
        object.__setattr__(self, "b_odd", float(self.b_odd))

    def values(self, sites):
        if sites.shape[1] != 1:
            raise ValueError("alternating_1d only defined for nu=1")
        even = np.mod(sites[:, 0], 2) == 0
        return 1j * np.where(even, self.b_even, self.b_odd).astype(np.float64)

    def sup_abs(self):
        return max(abs(self.b_even), abs(self.b_odd))

    def global_range(self):
        lo, hi = sorted((self.b_even, self.b_odd))
        return (0.0, 0.0, lo, hi)

    def im_alternating(self):
        return (self.b_even, self.b_odd)

    def im_support_parity(self):
        if self.b_even == 0.0 and self.b_odd == 0.0:
            return "zero"
        if self.b_odd == 0.0:
            return "even"
        if self.b_even == 0.0:
            return "odd"
        return None

    def im_nonzero_infinite(self):
        return self.b_even != 0.0 or self.b_odd != 0.0

    def re_weighted_summable(self):
        return True

    def re_decays_to_zero(self):
        return True

    def im_decays_to_zero(self):
        return self.b_even == 0.0 and self.b_odd == 0.0


@dataclass(frozen=True)
class SeededRandomPotential(PotentialSpec):
    """Counter-based random values on a finite carrier box, zero outside.

    Each site's value depends only on (seed, site) via a Philox stream, so
    evaluation order, box shape, and vectorization cannot change it.
    """

    seed: int
    box: LatticeBox
    re_range: tuple[float, float]
    im_range: tuple[float, float]
    kind: str = field(default="seeded_random", init=False)

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "re_range", (float(self.re_range[0]), float(self.re_range[1])))
        object.__setattr__(self, "im_range", (float(self.im_range[0]), float(self.im_range[1])))
        if self.re_range[0] > self.re_range[1] or self.im_range[0] > self.im_range[1]:
            raise ValueError("ranges must be (lo, hi) with lo <= hi")
        if self.box.nu > 4:
            raise ValueError("seeded_random supports nu <= 4 (Philox counter width)")

    def _site_value(self, site: tuple[int, ...]) -> complex:
        counter = [0] * 4
        for j, c in enumerate(site):
            counter[j] = int(c) + (1 << 63)
        gen = np.random.Generator(np.random.Philox(key=self.seed, counter=counter))
        u = gen.random(2)
        rlo, rhi = self.re_range
        ilo, ihi = self.im_range
        return complex(rlo + u[0] * (rhi - rlo), ilo + u[1] * (ihi - ilo))

    @cached_property
    def _carrier_values(self) -> dict[tuple[int, ...], complex]:
        return {tuple(s): self._site_value(tuple(s)) for s in map(tuple, self.box.sites)}

    def values(self, sites):
        carrier = self._carrier_values
        return np.array([carrier.get(tuple(int(c) for c in s), 0.0) for s in sites],
                        dtype=np.complex128)

    def sup_abs(self):
        return max((abs(v) for v in self._carrier_values.values()), default=0.0)

    def global_range(self):
        return _hull4([0j] + list(self._carrier_values.values()))

    @cached_property
    def support_radius(self) -> int:
        corners = self.box.sites
        return int(np.abs(corners).sum(axis=1).max()) if len(corners) else 0

    def tail_info(self):
        return TailInfo(radius=self.support_radius, base=0j)

    def im_support_parity(self):
        if all(v.imag == 0.0 for v in self._carrier_values.values()):
            return "zero"
        if self.box.nu != 1:
            return None
        pars = {s[0] % 2 for s, v in self._carrier_values.items() if v.imag != 0.0}
        return {frozenset({0}): "even", frozenset({1}): "odd"}.get(frozenset(pars))

    def re_weighted_summable(self):
        return True


@dataclass(frozen=True)
class SumPotential(PotentialSpec):
    terms: tuple[PotentialSpec, ...]
    kind: str = field(default="sum", init=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("sum potential needs at least one term")

    def values(self, sites):
        out = np.zeros(len(sites), dtype=np.complex128)
        for t in self.terms:
            out += t.values(sites)
        return out

    def sup_abs(self):
        return sum(t.sup_abs() for t in self.terms)

    def global_range(self):
        lo_r = hi_r = lo_i = hi_i = 0.0
        first = True
        for t in self.terms:
            a, b, c, d = t.global_range()
            if first:
                lo_r, hi_r, lo_i, hi_i = a, b, c, d
                first = False
            else:
                lo_r, hi_r, lo_i, hi_i = lo_r + a, hi_r + b, lo_i + c, hi_i + d
        return (lo_r, hi_r, lo_i, hi_i)

    def tail_info(self):
        tails = [t.tail_info() for t in self.terms]
        if any(t is None for t in tails):
            return None
        radius = max(t.radius for t in tails)
        base = sum((t.base for t in tails), 0j)
        re_dev = tuple(b for t in tails for b in t.re_dev)
        im_dev = tuple(b for t in tails for b in t.im_dev)
        return TailInfo(radius=radius, base=base, re_dev=re_dev, im_dev=im_dev)

    def im_alternating(self):
        alt = None
        shift = 0.0
        for t in self.terms:
            if isinstance(t, Alternating1DPotential):
                if alt is not None:
                    return None
                alt = t.im_alternating()
            elif isinstance(t, ConstantPotential):
                shift += t.c.imag
            elif t.im_support_parity() == "zero":
                continue
            else:
                return None
        if alt is None:
            return None
        return (alt[0] + shift, alt[1] + shift)

    def im_support_parity(self):
        pars = {p for p in (t.im_support_parity() for t in self.terms) if p != "zero"}
        if not pars:
            return "zero"
        if None in pars or len(pars) > 1:
            return None
        return pars.pop()

    def im_nonzero_infinite(self):
        alt = self.im_alternating()
        if alt is not None and (alt[0] != 0.0 or alt[1] != 0.0):
            return True
        live = [t for t in self.terms if t.im_support_parity() != "zero"]
        if len(live) == 1:
            return live[0].im_nonzero_infinite()
        return False

    def re_weighted_summable(self):
        return all(t.re_weighted_summable() for t in self.terms)

    def re_decays_to_zero(self):
        return all(t.re_decays_to_zero() for t in self.terms)

    def im_decays_to_zero(self):
        return all(t.im_decays_to_zero() for t in self.terms)


# ---------------------------------------------------------------------------
# assembled operator


@dataclass(frozen=True)
class Provenance:
    box: LatticeBox
    potential: PotentialSpec


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex matrix plus assembly provenance.

    hermitian is an exact (zero-tolerance) entrywise check against the
    conjugate transpose, performed once at construction.
    """

    matrix: np.ndarray
    provenance: Provenance | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, order="C")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def hermitian(self) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.conj().T))

    @cached_property
    def frobenius(self) -> float:
        return float(np.linalg.norm(self.matrix, "fro"))


def assemble(box: LatticeBox, potential: PotentialSpec,
             max_dim: int | None = None) -> OperatorMatrix:
    """Dirichlet truncation of hopping + diagonal potential to the box.

    Off-diagonal entries are 1 exactly for site pairs at l1-distance one
    inside the box; hops leaving the box are dropped.  Refuses to build
    matrices larger than max_dim (default DEFAULT_MAX_DIM).
    """
    limit = DEFAULT_MAX_DIM if max_dim is None else int(max_dim)
    n = box.site_count
    if n > limit:
        raise DimensionLimitError(
            f"box has {n} sites, exceeding the dimension cap {limit}; "
            f"raise max_dim explicitly to proceed",
            where="core_model.assemble",
        )
    m = np.zeros((n, n), dtype=np.complex128)
    idx = np.arange(n).reshape(box.shape)
    for axis in range(box.nu):
        a = np.moveaxis(idx, axis, 0)[:-1].ravel()
        b = np.moveaxis(idx, axis, 0)[1:].ravel()
        m[a, b] = 1.0
        m[b, a] = 1.0
    diag = potential.values(box.sites)
    m[np.arange(n), np.arange(n)] = diag
    return OperatorMatrix(m, provenance=Provenance(box, potential))


def real_part(op: OperatorMatrix) -> OperatorMatrix:
    """(A + A*)/2 as a fresh hermitian OperatorMatrix."""
    m = op.matrix
    return OperatorMatrix((m + m.conj().T) / 2.0)


def imag_part(op: OperatorMatrix) -> OperatorMatrix:
    """(A - A*)/(2i) as a fresh hermitian OperatorMatrix."""
    m = op.matrix
    return OperatorMatrix((m - m.conj().T) / 2.0j)


def potential_bounds(potential: PotentialSpec, box: LatticeBox,
                     ) -> tuple[float, float, float, float]:
    """(Rmin, Rmax, Imin, Imax): hull of the potential over the box, widened
    by the kind's global range so that every off-box value is also covered."""
    vals = potential.values(box.sites)
    g = potential.global_range()
    return (
        min(float(vals.real.min()), g[0]),
        max(float(vals.real.max()), g[1]),
        min(float(vals.imag.min()), g[2]),
        max(float(vals.imag.max()), g[3]),
    )
