"""Enumeration of all indecomposables for representation-finite algebras.

The knitting route seeds the index with the projectives, injectives,
simples and the radical/socle layers of those, then closes under the AR
translate in both directions.  Completeness is certified afterwards by
mesh additivity: for every non-projective Z with almost split sequence
0 -> tau Z -> E -> Z -> 0, the middle term recomputed from irreducible-map
multiplicities must match dimension-wise.  The brute-force enumerator is
the independent oracle the tests compare against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import modcat as mc
from .algebra import Algebra
from .exactlin import Mat, rank


class LimitExceededError(Exception):
    """Knitting budget hit; the partial index is attached."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial or []


class BudgetExceededError(Exception):
    """Brute-force enumeration would exceed the configured work budget."""


class KnitIncompleteError(Exception):
    """The knitted index failed its completeness certificate."""


@dataclass
class IndecIndex:
    """All indecomposables up to iso, with AR arrows and the translate map."""

    algebra: Algebra
    modules: list
    ar_arrows: list = field(default_factory=list)  # (source, target, multiplicity)
    tau_map: dict = field(default_factory=dict)  # index -> index, non-projectives only
    _hom_cache: dict = field(default_factory=dict, repr=False)
    _ext_cache: dict = field(default_factory=dict, repr=False)
    _proj_flags: list = field(default_factory=list, repr=False)
    _inj_flags: list = field(default_factory=list, repr=False)

    def find_iso(self, M) -> int | None:
        """Index of the entry isomorphic to the indecomposable M, if any."""
        for i, X in enumerate(self.modules):
            if X.dim_vector() == M.dim_vector() and mc.iso_between_indecomposables(M, X) is not None:
                return i
        return None

    def hom_dim(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._hom_cache:
            self._hom_cache[key] = mc.hom_dim(self.modules[i], self.modules[j])
        return self._hom_cache[key]

    def ext_dim(self, k: int, i: int, j: int) -> int:
        key = (k, i, j)
        if key not in self._ext_cache:
            self._ext_cache[key] = mc.ext_dim(k, self.modules[i], self.modules[j])
        return self._ext_cache[key]

    def is_projective(self, i: int) -> bool:
        return self._proj_flags[i]

    def is_injective(self, i: int) -> bool:
        return self._inj_flags[i]

    def summand_indices(self, M) -> list | None:
        """Index (with multiplicity) of each indecomposable summand of M."""
        if M.is_zero():
            return []
        out = []
        for X, mult in mc.decompose(M).summands:
            i = self.find_iso(X)
            if i is None:
                return None
            out.extend([i] * mult)
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "modules": [m.to_json() for m in self.modules],
            "dim_vectors": [list(m.dim_vector()) for m in self.modules],
            "ar_arrows": [list(a) for a in self.ar_arrows],
            "tau": {str(k): v for k, v in sorted(self.tau_map.items())},
        }


def _seed_modules(A: Algebra):
    seeds = []
    for v in A.vertices:
        seeds.append(mc.projective(A, v))
    for v in A.vertices:
        seeds.append(mc.injective(A, v))
    for v in A.vertices:
        seeds.append(mc.simple(A, v))
    for v in A.vertices:
        P = mc.projective(A, v)
        radP, _ = mc.radical_submodule(P)
        if not radP.is_zero():
            seeds.append(radP)
        I = mc.injective(A, v)
        soc, inc = mc.submodule_from_columns(I, mc.socle_columns(I))
        quot = mc.map_parts(inc).cokernel
        if not quot.is_zero():
            seeds.append(quot)
    return seeds


def knit_indecomposables(A: Algebra, max_count: int = 64, max_dim: int = 64) -> IndecIndex:
    """Complete indecomposable census for a representation-finite algebra."""
    if max_count <= 0 or max_dim <= 0:
        raise ValueError("limits must be positive")
    found: list = []

    def register(M) -> bool:
        if M.is_zero():
            return False
        if M.total_dim > max_dim:
            raise LimitExceededError(
                f"module of dimension {M.total_dim} exceeds max_dim={max_dim}", partial=found)
        for X in found:
            if X.dim_vector() == M.dim_vector() and mc.iso_between_indecomposables(M, X) is not None:
                return False
        found.append(M)
        if len(found) > max_count:
            raise LimitExceededError(f"more than max_count={max_count} indecomposables", partial=found)
        return True

    for seed in _seed_modules(A):
        for X, _ in mc.decompose(seed).summands:
            register(X)

    cursor = 0
    while cursor < len(found):
        M = found[cursor]
        cursor += 1
        if not mc.is_projective(M):
            register(mc.tau(M))
        if not mc.is_injective(M):
            register(mc.tau_inv(M))

    found.sort(key=lambda m: (m.total_dim, m.dim_vector()))
    idx = IndecIndex(A, found)
    idx._proj_flags = [mc.is_projective(m) for m in found]
    idx._inj_flags = [mc.is_injective(m) for m in found]
    for i, M in enumerate(found):
        if not idx._proj_flags[i]:
            t = idx.find_iso(mc.tau(M))
            if t is None:
                raise KnitIncompleteError("tau image missing from index")
            idx.tau_map[i] = t
    _certify_and_mesh(idx)
    return idx


def _rad_basis_vectors(idx: IndecIndex, i: int, j: int):
    """The radical rad(X_i, X_j) as flat vectors (all of Hom for i != j)."""
    homs = mc.hom_basis(idx.modules[i], idx.modules[j])
    if i != j:
        return [mc.hom_to_vector(f) for f in homs], homs
    flat = [mc.flatten_endo(f) for f in homs]
    field_ = idx.algebra.field
    rad_coords = mc.radical_of_endos(field_, flat)
    rad_maps = []
    for coords in rad_coords:
        g = mc.ModMap.zero(idx.modules[i], idx.modules[j])
        for c, f in zip(coords, homs):
            if c:
                g = g.add(f.scale(c))
        rad_maps.append(g)
    return [mc.hom_to_vector(g) for g in rad_maps], rad_maps


def irreducible_multiplicities(idx: IndecIndex) -> dict:
    """a(X, Y) = dim rad(X,Y)/rad^2(X,Y) for all ordered pairs in the index."""
    n = len(idx.modules)
    field_ = idx.algebra.field
    rad_maps: dict = {}
    rad_dims: dict = {}
    for i in range(n):
        for j in range(n):
            vecs, maps_ = _rad_basis_vectors(idx, i, j)
            rad_maps[(i, j)] = maps_
            rad_dims[(i, j)] = len(vecs)
    out = {}
    for i in range(n):
        for j in range(n):
            if rad_dims[(i, j)] == 0:
                continue
            square = []
            for z in range(n):
                for g in rad_maps[(i, z)]:
                    for h in rad_maps[(z, j)]:
                        square.append(mc.hom_to_vector(h.compose(g)))
            veclen = len(mc.hom_to_vector(rad_maps[(i, j)][0]))
            sq_rank = rank(Mat.from_rows(field_, square, cols=veclen)) if square else 0
            a = rad_dims[(i, j)] - sq_rank
            if a > 0:
                out[(i, j)] = a
    return out


def _certify_and_mesh(idx: IndecIndex):
    mult = irreducible_multiplicities(idx)
    idx.ar_arrows = sorted((i, j, a) for (i, j), a in mult.items())
    # mesh additivity: dims(tau Z) + dims(Z) = sum of middle-term dims
    for z, M in enumerate(idx.modules):
        if idx.is_projective(z):
            continue
        t = idx.tau_map[z]
        lhs = [a + b for a, b in zip(idx.modules[t].dim_vector(), M.dim_vector())]
        rhs = [0] * len(lhs)
        for (i, j), a in mult.items():
            if j == z:
                for k, d in enumerate(idx.modules[i].dim_vector()):
                    rhs[k] += a * d
        if lhs != rhs:
            raise KnitIncompleteError(
                f"mesh at index {z} fails: middle {rhs} vs tau+self {lhs}")
        if mc.iso_between_indecomposables(mc.tau_inv(idx.modules[t]), M) is None:
            raise KnitIncompleteError(f"tau round trip fails at index {z}")


def brute_force_indecomposables(A: Algebra, max_dims: dict, budget: int = 2 ** 22) -> list:
    """All indecomposables with dim vector <= max_dims, by raw enumeration."""
    p = A.field.p
    bounds = [max_dims.get(v, 0) for v in A.vertices]
    total_work = 0
    vectors = list(itertools.product(*(range(b + 1) for b in bounds)))
    for dims in vectors:
        entries = sum(dims[A.vertex_index[a.target]] * dims[A.vertex_index[a.source]]
                      for a in A.arrows)
        total_work += p ** entries
    if total_work > budget:
        raise BudgetExceededError(f"enumeration needs {total_work} module candidates")
    out: list = []
    for dims in vectors:
        if sum(dims) == 0:
            continue
        dim_map = dict(zip(A.vertices, dims))
        shapes = [(a.name, dim_map[a.target], dim_map[a.source]) for a in A.arrows]
        entry_counts = [r * c for _, r, c in shapes]
        for assignment in itertools.product(*(itertools.product(range(p), repeat=e) for e in entry_counts)):
            action = {}
            for (name, r, c), flat in zip(shapes, assignment):
                action[name] = Mat.from_rows(A.field, [flat[i * c:(i + 1) * c] for i in range(r)], cols=c)
            try:
                M = mc.Module(A, dim_map, action, check=True)
            except ValueError:
                continue
            if not mc.is_indecomposable(M):
                continue
            if any(X.dim_vector() == M.dim_vector()
                   and mc.iso_between_indecomposables(M, X) is not None for X in out):
                continue
            out.append(M)
    out.sort(key=lambda m: (m.total_dim, m.dim_vector()))
    return out


def ar_quiver_dot(idx: IndecIndex) -> str:
    """The AR quiver in DOT format; tau is drawn dashed."""
    lines = ["digraph AR {"]
    for i, M in enumerate(idx.modules):
        label = "(" + ",".join(str(d) for d in M.dim_vector()) + ")"
        lines.append(f'  m{i} [label="{label}"];')
    for i, j, a in idx.ar_arrows:
        attr = f' [label="{a}"]' if a > 1 else ""
        lines.append(f"  m{i} -> m{j}{attr};")
    for z in sorted(idx.tau_map):
        lines.append(f"  m{z} -> m{idx.tau_map[z]} [style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
