"""Sparse exact linear algebra over a field.

Vectors are dicts ``index -> nonzero scalar``; matrices are dicts
``column -> vector`` (the image of the column basis vector); rank-3 tensors
are dicts ``(i, j) -> vector``.  No explicit zeros are ever stored, and all
pivot choices are canonical (leftmost pivot, unit pivot entries), so every
result is deterministic and directly comparable.
"""

from __future__ import annotations

import itertools

from .errors import DimensionMismatch, FieldTooLargeForEnumeration, NoSolution

Vec = dict
Mat = dict


def v_clean(vec, F):
    zero = F.zero()
    for k in [k for k, v in vec.items() if v == zero]:
        del vec[k]
    return vec


def v_add(F, a, b):
    out = dict(a)
    add = F.add
    zero = F.zero()
    for k, v in b.items():
        s = add(out.get(k, zero), v)
        if s == zero:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def v_sub(F, a, b):
    out = dict(a)
    sub = F.sub
    zero = F.zero()
    for k, v in b.items():
        s = sub(out.get(k, zero), v)
        if s == zero:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def v_scale(F, c, a):
    if c == F.zero():
        return {}
    mul = F.mul
    return {k: mul(c, v) for k, v in a.items()}


def v_axpy(F, acc, c, a):
    """acc += c * a, in place; acc is mutated and returned."""
    zero = F.zero()
    if c == zero:
        return acc
    add = F.add
    mul = F.mul
    for k, v in a.items():
        s = add(acc.get(k, zero), mul(c, v))
        if s == zero:
            acc.pop(k, None)
        else:
            acc[k] = s
    return acc


def v_neg(F, a):
    neg = F.neg
    return {k: neg(v) for k, v in a.items()}


def v_eq(a, b):
    return a == b


def v_dot(F, a, b):
    zero = F.zero()
    acc = zero
    if len(b) < len(a):
        a, b = b, a
    for k, v in a.items():
        w = b.get(k)
        if w is not None:
            acc = F.add(acc, F.mul(v, w))
    return acc


def unit_vec(i, F):
    return {i: F.one()}


def mat_identity(n, F):
    one = F.one()
    return {i: {i: one} for i in range(n)}


def mat_apply(F, M, vec):
    """M applied to vec, with M a dict column -> image vector."""
    out = {}
    for j, c in vec.items():
        col = M.get(j)
        if col:
            v_axpy(F, out, c, col)
    return out


def mat_compose(F, M2, M1):
    """The matrix of x -> M2(M1(x)); empty image columns are not stored."""
    out = {}
    for j, col in M1.items():
        img = mat_apply(F, M2, col)
        if img:
            out[j] = img
    return out


def mat_transpose(M):
    out = {}
    for j, col in M.items():
        for i, v in col.items():
            out.setdefault(i, {})[j] = v
    return out


def mat_eq(A, B):
    return {j: c for j, c in A.items() if c} == {j: c for j, c in B.items() if c}


def mat_scale(F, c, M):
    return {j: v_scale(F, c, col) for j, col in M.items()}


def mat_sub(F, A, B):
    cols = set(A) | set(B)
    out = {}
    for j in cols:
        col = v_sub(F, A.get(j, {}), B.get(j, {}))
        if col:
            out[j] = col
    return out


def contract(tensor, x, y, F):
    """sum_{i,j} x_i y_j T[i][j] for a rank-3 tensor T stored as (i,j) -> Vec."""
    out = {}
    mul = F.mul
    for i, cx in x.items():
        for j, cy in y.items():
            cell = tensor.get((i, j))
            if cell:
                v_axpy(F, out, mul(cx, cy), cell)
    return out


class Echelon:
    """A reduced-row-echelon spanning set, kept fully reduced incrementally.

    Rows are stored by pivot column; pivots are the leftmost nonzero entries
    and are normalized to 1.  Because RREF is unique, the final state does not
    depend on insertion order, which makes subspaces canonically comparable.
    """

    def __init__(self, F, ambient: int):
        self.F = F
        self.ambient = ambient
        self.rows: dict = {}  # pivot column -> row vector

    def reduce(self, vec):
        """The residue of vec modulo the current row space (a fresh dict)."""
        F = self.F
        out = dict(vec)
        rows = self.rows
        changed = True
        while changed:
            changed = False
            for k in sorted(out):
                row = rows.get(k)
                if row is not None:
                    v_axpy(F, out, F.neg(out[k]), row)
                    changed = True
                    break
        return out

    def insert(self, vec) -> bool:
        """Add vec to the span; True when the dimension grew."""
        F = self.F
        res = self.reduce(vec)
        if not res:
            return False
        piv = min(res)
        inv = F.inv(res[piv])
        row = v_scale(F, inv, res)
        # back-eliminate the new pivot from existing rows
        for p, r in self.rows.items():
            c = r.get(piv)
            if c is not None:
                v_axpy(F, r, F.neg(c), row)
        self.rows[piv] = row
        return True

    def insert_all(self, vecs):
        grew = False
        for v in vecs:
            grew = self.insert(v) or grew
        return grew

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def pivots(self):
        return sorted(self.rows)

    def basis(self):
        return [self.rows[p] for p in self.pivots()]

    def coordinates(self, vec):
        """Coordinates of vec in the canonical basis; None when not in span.

        Rows are fully reduced, so the coordinate along the row with pivot p
        is just vec[p] once membership is known.
        """
        if not self.contains(vec):
            return None
        zero = self.F.zero()
        return [vec.get(p, zero) for p in self.pivots()]

    def copy(self):
        e = Echelon(self.F, self.ambient)
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        return e

    def key(self):
        """Canonical hashable form; equal subspaces give equal keys."""
        return tuple(
            (p, tuple(sorted(self.rows[p].items()))) for p in self.pivots()
        )

    def __eq__(self, other):
        return (
            isinstance(other, Echelon)
            and self.ambient == other.ambient
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash((self.ambient, self.key()))


def span(F, ambient, vecs) -> Echelon:
    e = Echelon(F, ambient)
    for v in vecs:
        e.insert(v)
    return e


def subspace_sum(U: Echelon, V: Echelon) -> Echelon:
    if U.ambient != V.ambient:
        raise DimensionMismatch("ambient dimensions differ")
    out = U.copy()
    for row in V.basis():
        out.insert(row)
    return out


def annihilator(U: Echelon) -> Echelon:
    """All x with sum_i row_i x_i = 0 for every basis row, i.e. the kernel of
    the basis matrix.  Realizes the orthogonal complement under the standard
    dual pairing."""
    rows = [(dict(r), U.F.zero()) for r in U.basis()]
    _, kernel = solve_rows(U.F, rows, U.ambient)
    return kernel


def subspace_intersection(U: Echelon, V: Echelon) -> Echelon:
    if U.ambient != V.ambient:
        raise DimensionMismatch("ambient dimensions differ")
    return annihilator(subspace_sum(annihilator(U), annihilator(V)))


def solve_rows(F, rows, n):
    """Solve the affine system given as (coefficient vector, rhs) rows.

    Returns ``(particular, kernel)`` where the particular solution sets every
    free variable to zero (canonical) and the kernel is an Echelon with one
    canonical generator per free variable.  Raises NoSolution when the system
    is inconsistent.
    """
    RHS = n  # augmented column index
    ech = Echelon(F, n + 1)
    for coeffs, rhs in rows:
        aug = dict(coeffs)
        if rhs != F.zero():
            aug[RHS] = rhs
        res = ech.reduce(aug)
        if not res:
            continue
        piv = min(res)
        if piv == RHS:
            raise NoSolution("inconsistent linear system")
        inv = F.inv(res[piv])
        row = v_scale(F, inv, res)
        for p, r in ech.rows.items():
            c = r.get(piv)
            if c is not None:
                v_axpy(F, r, F.neg(c), row)
        ech.rows[piv] = row

    pivots = ech.pivots()
    particular = {}
    for p in pivots:
        c = ech.rows[p].get(RHS)
        if c is not None:
            particular[p] = c
    free = [j for j in range(n) if j not in ech.rows]
    kernel = Echelon(F, n)
    one = F.one()
    for f in free:
        vec = {f: one}
        for p in pivots:
            c = ech.rows[p].get(f)
            if c is not None:
                vec[p] = F.neg(c)
        kernel.insert(vec)
    return particular, kernel


def solve_affine(A: Mat, b: Vec, F, nrows: int, ncols: int):
    """Solve A x = b with A given as column -> image vector.

    Returns (particular, kernel).  Raises NoSolution when inconsistent and
    DimensionMismatch on shape violations.
    """
    for j, col in A.items():
        if j >= ncols or any(i >= nrows for i in col):
            raise DimensionMismatch("matrix entries out of range")
    if any(i >= nrows for i in b):
        raise DimensionMismatch("rhs out of range")
    rows_by_i: dict = {}
    for j, col in A.items():
        for i, v in col.items():
            rows_by_i.setdefault(i, {})[j] = v
    rows = []
    zero = F.zero()
    for i in sorted(set(rows_by_i) | set(b)):
        rows.append((rows_by_i.get(i, {}), b.get(i, zero)))
    return solve_rows(F, rows, ncols)


def mat_rank(F, M, nrows=None) -> int:
    ech = Echelon(F, nrows if nrows is not None else 1 << 30)
    for j in sorted(M):
        ech.insert(M[j])
    return ech.dim


def mat_kernel(F, M, ncols: int) -> Echelon:
    """Kernel of the linear map given by columns of M (unknowns = columns)."""
    rows_by_i: dict = {}
    for j, col in M.items():
        for i, v in col.items():
            rows_by_i.setdefault(i, {})[j] = v
    rows = [(r, F.zero()) for _, r in sorted(rows_by_i.items())]
    _, kernel = solve_rows(F, rows, ncols)
    return kernel


def mat_inverse(F, M, n):
    """Inverse of an n x n matrix given as columns; None when singular."""
    ech = Echelon(F, 2 * n)
    for j in range(n):
        aug = dict(M.get(j, {}))
        aug[n + j] = F.one()
        ech.insert(aug)
    if ech.dim < n or ech.pivots()[:n] != list(range(n)):
        return None
    inv = {}
    for p in range(n):
        col = {j - n: v for j, v in ech.rows[p].items() if j >= n}
        if col:
            inv[p] = col
    return inv


def echelon_points(ech: Echelon, F):
    """Every vector of the subspace, coefficients enumerated in field order."""
    basis = ech.basis()
    if not basis:
        yield {}
        return
    if F.size is None:
        raise FieldTooLargeForEnumeration("cannot enumerate a rational subspace")
    for coeffs in itertools.product(list(F.elements()), repeat=len(basis)):
        out: dict = {}
        for c, b in zip(coeffs, basis):
            v_axpy(F, out, c, b)
        yield out


def echelon_points_guard(ech: Echelon, F, budget: int):
    """Points of the subspace with the zero vector first, lazily capped at
    ``budget`` nonzero offsets; over the rationals only the zero offset."""
    yield {}
    if F.size is None or ech.dim == 0:
        return
    basis = ech.basis()
    count = 0
    zero = F.zero()
    for coeffs in itertools.product(list(F.elements()), repeat=len(basis)):
        if all(c == zero for c in coeffs):
            continue
        out: dict = {}
        for c, b in zip(coeffs, basis):
            v_axpy(F, out, c, b)
        count += 1
        yield out
        if count >= budget:
            return


class ParallelEchelon:
    """Echelon on source vectors with mirrored images, for consistency checks.

    Inserting a pair (a, c) records that a linear map sends a to c; reduction
    is applied to both sides in parallel.  ``insert`` reports a contradiction
    when a dependent source vector arrives with an inconsistent image.
    """

    def __init__(self, F, ambient_src, ambient_dst):
        self.F = F
        self.src = Echelon(F, ambient_src)
        self.images: dict = {}  # pivot -> image vector

    def reduce_pair(self, a, c):
        F = self.F
        ra, rc = dict(a), dict(c)
        changed = True
        while changed:
            changed = False
            for k in sorted(ra):
                row = self.src.rows.get(k)
                if row is not None:
                    coef = ra[k]
                    v_axpy(F, ra, F.neg(coef), row)
                    v_axpy(F, rc, F.neg(coef), self.images[k])
                    changed = True
                    break
        return ra, rc

    def insert(self, a, c):
        """Returns "new", "consistent", or "conflict"."""
        F = self.F
        ra, rc = self.reduce_pair(a, c)
        if not ra:
            return "consistent" if not rc else "conflict"
        piv = min(ra)
        inv = F.inv(ra[piv])
        row = v_scale(F, inv, ra)
        img = v_scale(F, inv, rc)
        for p, r in self.src.rows.items():
            coef = r.get(piv)
            if coef is not None:
                v_axpy(F, r, F.neg(coef), row)
                v_axpy(F, self.images[p], F.neg(coef), img)
        self.src.rows[piv] = row
        self.images[piv] = img
        return "new"

    @property
    def dim(self):
        return self.src.dim

    def image_of(self, vec):
        """Image of vec under the recorded partial map; None if outside span."""
        ra, rc = self.reduce_pair(vec, {})
        if ra:
            return None
        return v_neg(self.F, rc)
