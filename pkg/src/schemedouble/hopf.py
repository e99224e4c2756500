"""Finite dimensional Hopf algebras as labeled bases with sparse structure
constants, plus brute-force axiom verification, duals, variants, tensor
products, morphism tests, convolution algebra, and grouplike/primitive
searches.

Conventions.  A Hopf algebra of dimension n carries

* ``mult``:     dict (i, j) -> Vec, the product of basis vectors i and j,
* ``unit``:     Vec, the coordinates of 1,
* ``comult``:   dict i -> Ten2 (dict (j, k) -> scalar),
* ``counit``:   Vec viewed as a functional,
* ``antipode``: Mat (dict column -> image Vec).

All verification is exhaustive over basis tuples; reports carry the first
violating tuple as a witness.
"""

from __future__ import annotations

import itertools

from .errors import (
    AntipodeNotInvertible,
    BudgetExceeded,
    FieldMismatch,
    FieldTooLargeForEnumeration,
    NoSolution,
    NotInvertible,
)
from .linalg import (
    Echelon,
    ParallelEchelon,
    echelon_points,
    mat_apply,
    mat_compose,
    mat_identity,
    mat_inverse,
    mat_transpose,
    solve_rows,
    unit_vec,
    v_axpy,
    v_scale,
)


def t2_outer(F, v, w):
    mul = F.mul
    return {(i, j): mul(a, b) for i, a in v.items() for j, b in w.items()}


def t2_axpy(F, acc, c, t):
    zero = F.zero()
    if c == zero:
        return acc
    add, mul = F.add, F.mul
    for k, v in t.items():
        s = add(acc.get(k, zero), mul(c, v))
        if s == zero:
            acc.pop(k, None)
        else:
            acc[k] = s
    return acc


class HopfAlgebra:
    def __init__(self, field, labels, mult, unit, comult, counit, antipode, name=""):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.mult = mult
        self.unit = unit
        self.comult = comult
        self.counit = counit
        self.antipode = antipode
        self.name = name
        self._flags = {}

    def __repr__(self):
        return f"HopfAlgebra({self.name or 'dim %d' % self.dim})"

    # -- structure evaluated on general elements -------------------------

    def product(self, v, w):
        F = self.field
        out = {}
        mul = F.mul
        mult = self.mult
        for i, a in v.items():
            for j, b in w.items():
                cell = mult.get((i, j))
                if cell:
                    v_axpy(F, out, mul(a, b), cell)
        return out

    def product_many(self, vecs):
        out = None
        for v in vecs:
            out = v if out is None else self.product(out, v)
        return out if out is not None else dict(self.unit)

    def coproduct(self, v):
        F = self.field
        out = {}
        for i, a in v.items():
            t2_axpy(F, out, a, self.comult[i])
        return out

    def delta2(self, v):
        """(Delta x id)Delta(v) as a Ten3; coassociativity makes the order
        immaterial for valid inputs."""
        F = self.field
        out = {}
        zero = F.zero()
        add, mul = F.add, F.mul
        for (j, k), c in self.coproduct(v).items():
            for (a, b), d in self.comult[j].items():
                key = (a, b, k)
                s = add(out.get(key, zero), mul(c, d))
                if s == zero:
                    out.pop(key, None)
                else:
                    out[key] = s
        return out

    def counit_of(self, v):
        F = self.field
        acc = F.zero()
        for i, a in v.items():
            c = self.counit.get(i)
            if c is not None:
                acc = F.add(acc, F.mul(a, c))
        return acc

    def antipode_of(self, v):
        return mat_apply(self.field, self.antipode, v)

    def tensor_square_product(self, x, y):
        """Product of two elements of H (x) H given as Ten2 dicts."""
        F = self.field
        mul = F.mul
        mult = self.mult
        out = {}
        zero = F.zero()
        add = F.add
        for (a, b), cx in x.items():
            for (c, d), cy in y.items():
                left = mult.get((a, c))
                if not left:
                    continue
                right = mult.get((b, d))
                if not right:
                    continue
                coef = mul(cx, cy)
                for l, cl in left.items():
                    cc = mul(coef, cl)
                    for r, cr in right.items():
                        key = (l, r)
                        s = add(out.get(key, zero), mul(cc, cr))
                        if s == zero:
                            out.pop(key, None)
                        else:
                            out[key] = s
        return out

    # -- cached global properties ----------------------------------------

    def is_commutative(self):
        if "comm" not in self._flags:
            self._flags["comm"] = all(
                self.mult.get((i, j), {}) == self.mult.get((j, i), {})
                for i in range(self.dim)
                for j in range(i)
            )
        return self._flags["comm"]

    def is_cocommutative(self):
        if "cocomm" not in self._flags:
            ok = True
            for i in range(self.dim):
                t = self.comult[i]
                if any(t.get((k, j)) != c for (j, k), c in t.items()):
                    ok = False
                    break
            self._flags["cocomm"] = ok
        return self._flags["cocomm"]

    def is_involutive(self):
        if "inv" not in self._flags:
            F = self.field
            s2 = mat_compose(F, self.antipode, self.antipode)
            self._flags["inv"] = all(
                s2.get(i, {}) == unit_vec(i, F) for i in range(self.dim)
            )
        return self._flags["inv"]

    def basis_vec(self, i):
        return {i: self.field.one()}


class VerificationReport:
    """Outcome of an exhaustive axiom check: one (name, ok, witness) row per
    axiom, plus structural flags."""

    def __init__(self, subject=""):
        self.subject = subject
        self.checks = []
        self.flags = {}

    def record(self, name, ok, witness=""):
        self.checks.append((name, bool(ok), witness))

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(n, w) for n, ok, w in self.checks if not ok]

    def as_dict(self):
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [
                {"name": n, "ok": ok, "witness": w} for n, ok, w in self.checks
            ],
            "flags": dict(self.flags),
        }

    def lines(self):
        out = []
        for n, ok, w in self.checks:
            mark = "pass" if ok else "FAIL"
            out.append(f"  [{mark}] {n}" + (f"  witness: {w}" if w and not ok else ""))
        for k, v in self.flags.items():
            out.append(f"  flag {k} = {v}")
        return out


def verify_hopf(H: HopfAlgebra, sample_stride: int = 1) -> VerificationReport:
    """Check every Hopf axiom on all basis tuples and report witnesses.

    ``sample_stride > 1`` thins the quadratic and cubic sweeps to a
    deterministic arithmetic-progression subsample (for quick looks at very
    large algebras); golden checks always run with the full stride 1.
    """
    F = H.field
    n = H.dim
    rep = VerificationReport(H.name or f"hopf(dim {n})")
    mult = H.mult
    step = max(1, sample_stride)
    idxs = list(range(0, n, step)) if step > 1 else range(n)

    ok, wit = True, ""
    for i in idxs:
        for j in idxs:
            mij = mult.get((i, j), {})
            for k in idxs:
                lhs = {}
                for l, c in mij.items():
                    cell = mult.get((l, k))
                    if cell:
                        v_axpy(F, lhs, c, cell)
                rhs = {}
                for l, c in mult.get((j, k), {}).items():
                    cell = mult.get((i, l))
                    if cell:
                        v_axpy(F, rhs, c, cell)
                if lhs != rhs:
                    ok, wit = False, f"({H.labels[i]},{H.labels[j]},{H.labels[k]})"
                    break
            if not ok:
                break
        if not ok:
            break
    rep.record("associativity", ok, wit)

    ok, wit = True, ""
    for i in range(n):
        e = H.basis_vec(i)
        if H.product(H.unit, e) != e or H.product(e, H.unit) != e:
            ok, wit = False, H.labels[i]
            break
    rep.record("unit law", ok, wit)

    ok, wit = True, ""
    for i in range(n):
        left = {}
        right = {}
        for (j, k), c in H.comult[i].items():
            for (a, b), d in H.comult[j].items():
                key = (a, b, k)
                cur = left.get(key, F.zero())
                s = F.add(cur, F.mul(c, d))
                if s == F.zero():
                    left.pop(key, None)
                else:
                    left[key] = s
            for (a, b), d in H.comult[k].items():
                key = (j, a, b)
                cur = right.get(key, F.zero())
                s = F.add(cur, F.mul(c, d))
                if s == F.zero():
                    right.pop(key, None)
                else:
                    right[key] = s
        if left != right:
            ok, wit = False, H.labels[i]
            break
    rep.record("coassociativity", ok, wit)

    ok, wit = True, ""
    for i in range(n):
        left, right = {}, {}
        for (j, k), c in H.comult[i].items():
            ej = H.counit.get(j)
            if ej is not None:
                v_axpy(F, left, F.mul(c, ej), unit_vec(k, F))
            ek = H.counit.get(k)
            if ek is not None:
                v_axpy(F, right, F.mul(c, ek), unit_vec(j, F))
        if left != H.basis_vec(i) or right != H.basis_vec(i):
            ok, wit = False, H.labels[i]
            break
    rep.record("counit law", ok, wit)

    ok, wit = True, ""
    for i in idxs:
        if not ok:
            break
        for j in idxs:
            prod = mult.get((i, j), {})
            lhs = H.coproduct(prod)
            rhs = H.tensor_square_product(H.comult[i], H.comult[j])
            if lhs != rhs:
                ok, wit = False, f"({H.labels[i]},{H.labels[j]})"
                break
    rep.record("comultiplication multiplicative", ok, wit)

    ok, wit = True, ""
    for i in idxs:
        if not ok:
            break
        for j in idxs:
            lhs = H.counit_of(mult.get((i, j), {}))
            rhs = F.mul(H.counit.get(i, F.zero()), H.counit.get(j, F.zero()))
            if lhs != rhs:
                ok, wit = False, f"({H.labels[i]},{H.labels[j]})"
                break
    rep.record("counit multiplicative", ok, wit)

    rep.record(
        "comultiplication unital",
        H.coproduct(H.unit) == t2_outer(F, H.unit, H.unit),
    )
    rep.record("counit of unit", H.counit_of(H.unit) == F.one())

    ok, wit = True, ""
    for i in range(n):
        left, right = {}, {}
        for (j, k), c in H.comult[i].items():
            sj = H.antipode.get(j)
            if sj:
                v_axpy(F, left, c, H.product(sj, H.basis_vec(k)))
            sk = H.antipode.get(k)
            if sk:
                v_axpy(F, right, c, H.product(H.basis_vec(j), sk))
        target = v_scale(F, H.counit.get(i, F.zero()), H.unit)
        if left != target or right != target:
            ok, wit = False, H.labels[i]
            break
    rep.record("antipode law", ok, wit)

    rep.flags["commutative"] = H.is_commutative()
    rep.flags["cocommutative"] = H.is_cocommutative()
    rep.flags["involutive"] = H.is_involutive()
    return rep


def dual_hopf(H: HopfAlgebra) -> HopfAlgebra:
    """The dual Hopf algebra in the dual basis.

    Multiplication and comultiplication trade places (with the evident
    transposes), unit and counit swap, and the antipode transposes.
    """
    F = H.field
    n = H.dim
    mult = {}
    for k in range(n):
        for (i, j), c in H.comult[k].items():
            mult.setdefault((i, j), {})[k] = c
    comult = {k: {} for k in range(n)}
    for (i, j), cell in H.mult.items():
        for k, c in cell.items():
            comult[k][(i, j)] = c
    return HopfAlgebra(
        field=F,
        labels=[lab + "*" for lab in H.labels],
        mult=mult,
        unit=dict(H.counit),
        comult=comult,
        counit=dict(H.unit),
        antipode=mat_transpose(H.antipode),
        name=f"{H.name}*" if H.name else "",
    )


def variant(H: HopfAlgebra, which: str) -> HopfAlgebra:
    """The opposite ("op") or co-opposite ("cop") Hopf algebra; the antipode
    is replaced by its inverse."""
    F = H.field
    s_inv = mat_inverse(F, H.antipode, H.dim)
    if s_inv is None:
        raise AntipodeNotInvertible("antipode matrix is singular")
    if which == "op":
        mult = {(j, i): cell for (i, j), cell in H.mult.items()}
        comult = H.comult
    elif which == "cop":
        mult = H.mult
        comult = {
            i: {(k, j): c for (j, k), c in t.items()} for i, t in H.comult.items()
        }
    else:
        raise ValueError("variant must be 'op' or 'cop'")
    return HopfAlgebra(
        field=F,
        labels=list(H.labels),
        mult=mult,
        unit=dict(H.unit),
        comult=comult,
        counit=dict(H.counit),
        antipode=s_inv,
        name=f"{H.name}^{which}" if H.name else "",
    )


def tensor_hopf(A: HopfAlgebra, B: HopfAlgebra) -> HopfAlgebra:
    """Componentwise Hopf structure on A (x) B, basis index (i, j) -> i*dim(B)+j."""
    if A.field != B.field:
        raise FieldMismatch("tensor factors over different fields")
    F = A.field
    nb = B.dim
    idx = lambda i, j: i * nb + j

    labels = [f"{a}(x){b}" for a in A.labels for b in B.labels]
    mult = {}
    for (i1, j1), cell1 in A.mult.items():
        for (i2, j2), cell2 in B.mult.items():
            out = {}
            for a, ca in cell1.items():
                for b, cb in cell2.items():
                    out[idx(a, b)] = F.mul(ca, cb)
            if out:
                mult[(idx(i1, i2), idx(j1, j2))] = out
    unit = {}
    for a, ca in A.unit.items():
        for b, cb in B.unit.items():
            unit[idx(a, b)] = F.mul(ca, cb)
    comult = {}
    for i in range(A.dim):
        for j in range(B.dim):
            t = {}
            for (a1, a2), ca in A.comult[i].items():
                for (b1, b2), cb in B.comult[j].items():
                    t[(idx(a1, b1), idx(a2, b2))] = F.mul(ca, cb)
            comult[idx(i, j)] = t
    counit = {}
    for a, ca in A.counit.items():
        for b, cb in B.counit.items():
            counit[idx(a, b)] = F.mul(ca, cb)
    antipode = {}
    for i in range(A.dim):
        sa = A.antipode.get(i, {})
        for j in range(B.dim):
            sb = B.antipode.get(j, {})
            col = {}
            for a, ca in sa.items():
                for b, cb in sb.items():
                    col[idx(a, b)] = F.mul(ca, cb)
            if col:
                antipode[idx(i, j)] = col
    name = f"{A.name}(x){B.name}" if A.name and B.name else ""
    return HopfAlgebra(F, labels, mult, unit, comult, counit, antipode, name=name)


class LinMap:
    """A linear map between the underlying spaces of two Hopf algebras."""

    def __init__(self, source: HopfAlgebra, target: HopfAlgebra, mat):
        self.source = source
        self.target = target
        self.mat = {j: dict(col) for j, col in mat.items() if col}

    def apply(self, v):
        return mat_apply(self.target.field, self.mat, v)

    def __call__(self, v):
        return self.apply(v)

    def compose(self, other: "LinMap") -> "LinMap":
        return LinMap(
            other.source, self.target, mat_compose(self.target.field, self.mat, other.mat)
        )

    def transpose(self, dual_source: HopfAlgebra, dual_target: HopfAlgebra) -> "LinMap":
        """The dual map between the given dual Hopf algebras."""
        return LinMap(dual_target, dual_source, mat_transpose(self.mat))

    def rank(self):
        e = Echelon(self.target.field, self.target.dim)
        for j in sorted(self.mat):
            e.insert(self.mat[j])
        return e.dim

    def key(self):
        return tuple(
            (j, tuple(sorted(self.mat[j].items()))) for j in sorted(self.mat)
        )

    def __eq__(self, other):
        return isinstance(other, LinMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def identity_map(H: HopfAlgebra) -> LinMap:
    return LinMap(H, H, mat_identity(H.dim, H.field))


def is_hopf_morphism(f: LinMap, check_antipode=True):
    """True plus empty witness when f respects mult, unit, comult, counit on
    all basis tuples; otherwise (False, witness).  Antipode compatibility is
    automatic for bialgebra maps between Hopf algebras but is verified anyway.
    """
    A, B, F = f.source, f.target, f.target.field
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = f.apply(A.mult.get((i, j), {}))
            rhs = B.product(f.apply(A.basis_vec(i)), f.apply(A.basis_vec(j)))
            if lhs != rhs:
                return False, f"mult at ({A.labels[i]},{A.labels[j]})"
    if f.apply(A.unit) != B.unit:
        return False, "unit"
    for i in range(A.dim):
        lhs = B.coproduct(f.apply(A.basis_vec(i)))
        rhs = {}
        for (j, k), c in A.comult[i].items():
            t2_axpy(F, rhs, c, t2_outer(F, f.apply(A.basis_vec(j)), f.apply(A.basis_vec(k))))
        if lhs != rhs:
            return False, f"comult at {A.labels[i]}"
        if B.counit_of(f.apply(A.basis_vec(i))) != A.counit.get(i, F.zero()):
            return False, f"counit at {A.labels[i]}"
    if check_antipode:
        for i in range(A.dim):
            if f.apply(A.antipode.get(i, {})) != B.antipode_of(f.apply(A.basis_vec(i))):
                return False, f"antipode at {A.labels[i]}"
    return True, ""


def convolution(f: LinMap, g: LinMap) -> LinMap:
    """(f * g)(c) = f(c_1) g(c_2), using the source coalgebra and target algebra."""
    A, B = f.source, f.target
    F = B.field
    mat = {}
    for i in range(A.dim):
        out = {}
        for (j, k), c in A.comult[i].items():
            v_axpy(F, out, c, B.product(f.apply(A.basis_vec(j)), g.apply(A.basis_vec(k))))
        if out:
            mat[i] = out
    return LinMap(A, B, mat)


def convolution_unit(source: HopfAlgebra, target: HopfAlgebra) -> LinMap:
    F = target.field
    mat = {}
    for i in range(source.dim):
        c = source.counit.get(i)
        if c is not None:
            mat[i] = v_scale(F, c, target.unit)
    return LinMap(source, target, mat)


def convolution_inverse(f: LinMap) -> LinMap:
    """Solve f * g = unit.counit = g * f exactly; NotInvertible if impossible."""
    A, B = f.source, f.target
    F = B.field
    nA, nB = A.dim, B.dim
    flat = lambda col, coord: col * nB + coord

    rows = []
    for i in range(nA):
        lhs_rows: dict = {}
        rhs_rows: dict = {}
        for (j, k), c in A.comult[i].items():
            fj = f.apply(A.basis_vec(j))
            # f(e_j) * g(e_k): coefficient of unknown g[k][b] in output coord a
            for l, cl in fj.items():
                for b in range(nB):
                    cell = B.mult.get((l, b))
                    if cell:
                        coef = F.mul(c, cl)
                        for a, ca in cell.items():
                            key = flat(k, b)
                            d = lhs_rows.setdefault(a, {})
                            d[key] = F.add(d.get(key, F.zero()), F.mul(coef, ca))
            fk = f.apply(A.basis_vec(k))
            # g(e_j) * f(e_k)
            for l, cl in fk.items():
                for b in range(nB):
                    cell = B.mult.get((b, l))
                    if cell:
                        coef = F.mul(c, cl)
                        for a, ca in cell.items():
                            key = flat(j, b)
                            d = rhs_rows.setdefault(a, {})
                            d[key] = F.add(d.get(key, F.zero()), F.mul(coef, ca))
        target = v_scale(F, A.counit.get(i, F.zero()), B.unit)
        for a in set(lhs_rows) | set(target):
            rows.append((lhs_rows.get(a, {}), target.get(a, F.zero())))
        for a in set(rhs_rows) | set(target):
            rows.append((rhs_rows.get(a, {}), target.get(a, F.zero())))
    try:
        particular, kernel = solve_rows(F, rows, nA * nB)
    except NoSolution:
        raise NotInvertible("map has no convolution inverse")
    if kernel.dim:
        raise NotInvertible("convolution inverse system is underdetermined")
    mat: dict = {}
    for key, c in particular.items():
        col, coord = divmod(key, nB)
        mat.setdefault(col, {})[coord] = c
    return LinMap(A, B, {j: {k: v for k, v in col.items() if v != F.zero()} for j, col in mat.items()})


def quotient_by_hopf_ideal(H: HopfAlgebra, ideal: Echelon, name=""):
    """The quotient Hopf algebra H/I for a Hopf ideal I, on the canonical
    complement-of-pivots basis, together with the projection.  The quotient is
    re-verified; a non-Hopf ideal surfaces as a verification failure."""
    from .errors import VerificationFailure

    F = H.field
    n = H.dim
    reps = [i for i in range(n) if i not in ideal.rows]
    cls = {i: r for r, i in enumerate(reps)}
    m = len(reps)

    def project(v):
        res = ideal.reduce(v)
        return {cls[i]: c for i, c in res.items()}

    pi_mat = {}
    for i in range(n):
        col = project(unit_vec(i, F))
        if col:
            pi_mat[i] = col
    mult = {}
    for r in range(m):
        for s in range(m):
            cell = project(H.product(unit_vec(reps[r], F), unit_vec(reps[s], F)))
            if cell:
                mult[(r, s)] = cell
    unit = project(H.unit)
    comult = {}
    for r in range(m):
        t = {}
        for (a, b), c in H.comult[reps[r]].items():
            pa, pb = pi_mat.get(a), pi_mat.get(b)
            if pa and pb:
                t2_axpy(F, t, c, t2_outer(F, pa, pb))
        comult[r] = t
    counit = {}
    for r in range(m):
        c = H.counit.get(reps[r])
        if c is not None:
            counit[r] = c
    antipode = {}
    for r in range(m):
        col = project(H.antipode_of(unit_vec(reps[r], F)))
        if col:
            antipode[r] = col
    Q = HopfAlgebra(F, [f"[{H.labels[i]}]" for i in reps], mult, unit, comult,
                    counit, antipode, name=name or (f"{H.name}/I" if H.name else ""))
    rep = verify_hopf(Q)
    if not rep.ok:
        raise VerificationFailure("ideal quotient violates Hopf axioms: "
                                  + "; ".join(n_ for n_, _ in rep.failures()))
    pi = LinMap(H, Q, pi_mat)
    ok, wit = is_hopf_morphism(pi)
    if not ok:
        raise VerificationFailure(f"ideal projection is not a Hopf morphism: {wit}")
    return Q, pi


def primitives(H: HopfAlgebra) -> Echelon:
    """The subspace of v with Delta(v) = v(x)1 + 1(x)v."""
    F = H.field
    n = H.dim
    coef: dict = {}
    for i in range(n):
        for (j, k), c in H.comult[i].items():
            coef.setdefault((j, k), {})[i] = c
        for k, u in H.unit.items():
            d = coef.setdefault((i, k), {})
            d[i] = F.sub(d.get(i, F.zero()), u)
            d2 = coef.setdefault((k, i), {})
            d2[i] = F.sub(d2.get(i, F.zero()), u)
    rows = [( {i: c for i, c in r.items() if c != F.zero()}, F.zero()) for r in coef.values()]
    _, kernel = solve_rows(F, rows, n)
    return kernel


def _vec_candidates_finite(F, n):
    elems = list(F.elements())
    for coeffs in itertools.product(elems, repeat=n):
        out = {i: c for i, c in enumerate(coeffs) if c != F.zero()}
        yield out


def grouplikes(H: HopfAlgebra, budget: int = 10**7):
    """All g != 0 with Delta(g) = g(x)g and counit(g) = 1.

    Over a finite field this is exhaustive within the candidate budget; over
    the rationals only basis vectors and +/-1 coefficient patterns are tried
    (complete for coordinate and group algebras of constant groups, where
    every grouplike is a character with values in {1, -1}).
    """
    F = H.field
    n = H.dim
    one = F.one()

    def is_grouplike(v):
        return (
            v
            and H.counit_of(v) == one
            and H.coproduct(v) == t2_outer(F, v, v)
        )

    found = []
    seen = set()

    def note(v):
        key = tuple(sorted(v.items()))
        if key not in seen:
            seen.add(key)
            found.append(v)

    if F.size is not None:
        if F.size**n > budget:
            raise FieldTooLargeForEnumeration(
                f"{F.size}^{n} candidates exceed budget {budget}"
            )
        for v in _vec_candidates_finite(F, n):
            if is_grouplike(v):
                note(v)
    else:
        if 2**n > budget:
            raise FieldTooLargeForEnumeration(f"2^{n} sign patterns exceed budget")
        for i in range(n):
            v = {i: one}
            if is_grouplike(v):
                note(v)
        minus = F.neg(one)
        for signs in itertools.product((one, minus), repeat=n):
            v = dict(enumerate(signs))
            if is_grouplike(v):
                note(v)
    found.sort(key=lambda v: tuple(sorted(v.items(), key=str)))
    return found


def _t2_in_span_square(F, ech: Echelon, t2):
    """Decide T in span(x)span; returns the reduced pivot-coefficient grid or
    None.  Uses the unit-pivot structure of the echelon basis."""
    pivots = ech.pivots()
    coefs = {}
    for (a, b) in itertools.product(pivots, repeat=2):
        c = t2.get((a, b))
        if c is not None:
            coefs[(a, b)] = c
    rebuilt: dict = {}
    rows = ech.rows
    for (a, b), c in coefs.items():
        t2_axpy(F, rebuilt, c, t2_outer(F, rows[a], rows[b]))
    if rebuilt != t2:
        return None
    return coefs


class _SourceStep:
    __slots__ = ("kind", "vec", "basis_index")

    def __init__(self, kind, vec=None, basis_index=None):
        self.kind = kind
        self.vec = vec
        self.basis_index = basis_index


def _subalgebra_close(H, ech: Echelon, worklist):
    """Extend ech to the subalgebra generated by its span plus the worklist."""
    F = H.field
    pending = list(worklist)
    members = []
    for row in ech.basis():
        members.append(row)
    for v in pending:
        if ech.insert(v):
            members.append(v)
    grew = True
    while grew:
        grew = False
        snapshot = list(members)
        for a in snapshot:
            for b in snapshot:
                p = H.product(a, b)
                if p and ech.insert(p):
                    members.append(p)
                    grew = True
    return ech


def _source_chain(A: HopfAlgebra, src_grouplikes, src_primitives):
    """Assignment chain (grouplikes, primitive basis, filtration extensions)
    whose subalgebra closure reaches all of A, or None past the supported
    filtration."""
    F = A.field
    ech = Echelon(F, A.dim)
    ech.insert(A.unit)
    _subalgebra_close(A, ech, [])
    chain = []
    for g in src_grouplikes:
        if not ech.contains(g):
            chain.append(_SourceStep("grouplike", vec=g))
            _subalgebra_close(A, ech, [g])
    for b in src_primitives.basis():
        if not ech.contains(b):
            chain.append(_SourceStep("primitive", vec=b))
            _subalgebra_close(A, ech, [b])
    while ech.dim < A.dim:
        found = None
        for i in range(A.dim):
            e = A.basis_vec(i)
            if ech.contains(e):
                continue
            d = dict(A.comult[i])
            t2_axpy(F, d, F.neg(F.one()), t2_outer(F, e, A.unit))
            t2_axpy(F, d, F.neg(F.one()), t2_outer(F, A.unit, e))
            if _t2_in_span_square(F, ech, d) is not None:
                found = i
                break
        if found is None:
            return None
        chain.append(_SourceStep("extension", basis_index=found))
        _subalgebra_close(A, ech, [A.basis_vec(found)])
    return chain


def hopf_algebra_maps(
    A: HopfAlgebra,
    C: HopfAlgebra,
    src_grouplikes=None,
    tgt_grouplikes=None,
    budget: int = 500_000,
):
    """All Hopf algebra maps A -> C, by constraint-pruned generator images.

    Candidate images: grouplikes of A map into grouplikes of C, primitives
    into the primitive subspace, and filtration extensions into the affine
    solution set of their coproduct constraint.  Complete whenever the chain
    construction covers A (grouplike/primitively generated algebras and
    divided-power towers); raises BudgetExceeded otherwise or when the
    candidate count explodes.
    """
    if A.field != C.field:
        raise FieldMismatch("source and target over different fields")
    F = A.field
    glA = src_grouplikes if src_grouplikes is not None else grouplikes(A)
    glC = tgt_grouplikes if tgt_grouplikes is not None else grouplikes(C)
    prA = primitives(A)
    prC = primitives(C)
    chain = _source_chain(A, glA, prA)
    if chain is None:
        raise BudgetExceeded("source algebra outside the supported generation filtration")

    if any(s.kind == "primitive" for s in chain) and F.size is None and prC.dim > 0:
        raise FieldTooLargeForEnumeration(
            "cannot enumerate primitive images over the rationals"
        )
    prC_points = None
    if any(s.kind == "primitive" for s in chain):
        prC_points = list(echelon_points(prC, F)) if prC.dim else [{}]

    results = []
    seen = set()
    counter = [0]

    def emit(pech: ParallelEchelon):
        mat = {}
        for i in range(A.dim):
            img = pech.image_of(A.basis_vec(i))
            if img is None:
                return
            if img:
                mat[i] = img
        f = LinMap(A, C, mat)
        ok, _ = is_hopf_morphism(f)
        if ok and f.key() not in seen:
            seen.add(f.key())
            results.append(f)

    def close_products(pech, pairs):
        """Close the recorded pairs under products; False on contradiction."""
        queue = list(pairs)
        done = 0
        while done < len(queue):
            a1, c1 = queue[done]
            done += 1
            for a2, c2 in queue[:done]:
                for x, y in ((A.product(a1, a2), C.product(c1, c2)),
                             (A.product(a2, a1), C.product(c2, c1))):
                    st = pech.insert(x, y)
                    if st == "conflict":
                        return None
                    if st == "new":
                        queue.append((x, y))
        return queue

    def rec(step_idx, pech, pairs):
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded(f"candidate budget {budget} exhausted")
        if step_idx == len(chain):
            emit(pech)
            return
        step = chain[step_idx]
        if step.kind == "grouplike":
            candidates = [(step.vec, g) for g in glC]
        elif step.kind == "primitive":
            candidates = [(step.vec, z) for z in prC_points]
        else:
            e = A.basis_vec(step.basis_index)
            d = dict(A.comult[step.basis_index])
            t2_axpy(F, d, F.neg(F.one()), t2_outer(F, e, A.unit))
            t2_axpy(F, d, F.neg(F.one()), t2_outer(F, A.unit, e))
            # push both legs through the partial map
            img: dict = {}
            bad = False
            for (j, k), c in d.items():
                xj = pech.image_of(unit_vec(j, F))
                xk = pech.image_of(unit_vec(k, F))
                if xj is None or xk is None:
                    bad = True
                    break
                t2_axpy(F, img, c, t2_outer(F, xj, xk))
            if bad:
                return
            # solve Delta(z) - z(x)1 - 1(x)z = img, counit(z) = counit(e)
            rows = []
            coef: dict = {}
            for i in range(C.dim):
                for (j, k), c in C.comult[i].items():
                    coef.setdefault((j, k), {})[i] = c
                for k, u in C.unit.items():
                    dd = coef.setdefault((i, k), {})
                    dd[i] = F.sub(dd.get(i, F.zero()), u)
                    dd2 = coef.setdefault((k, i), {})
                    dd2[i] = F.sub(dd2.get(i, F.zero()), u)
            keys = set(coef) | set(img)
            for key in keys:
                r = {i: c for i, c in coef.get(key, {}).items() if c != F.zero()}
                rows.append((r, img.get(key, F.zero())))
            rows.append((dict(C.counit), A.counit_of(e)))
            try:
                part, kern = solve_rows(F, rows, C.dim)
            except NoSolution:
                return
            if kern.dim and F.size is None:
                raise FieldTooLargeForEnumeration(
                    "cannot enumerate extension images over the rationals"
                )
            cands = []
            for z0 in echelon_points(kern, F) if kern.dim else [{}]:
                z = dict(part)
                v_axpy(F, z, F.one(), z0)
                cands.append(z)
            candidates = [(e, z) for z in cands]

        for src_vec, tgt_vec in candidates:
            branch = ParallelEchelon(F, A.dim, C.dim)
            branch.src.rows = {p: dict(r) for p, r in pech.src.rows.items()}
            branch.images = {p: dict(r) for p, r in pech.images.items()}
            st = branch.insert(src_vec, tgt_vec)
            if st == "conflict":
                continue
            new_pairs = close_products(branch, pairs + [(src_vec, tgt_vec)])
            if new_pairs is None:
                continue
            rec(step_idx + 1, branch, new_pairs)

    root = ParallelEchelon(F, A.dim, C.dim)
    root.insert(dict(A.unit), dict(C.unit))
    base_pairs = close_products(root, [(dict(A.unit), dict(C.unit))])
    rec(0, root, base_pairs)
    results.sort(key=lambda f: str(f.key()))
    return results
