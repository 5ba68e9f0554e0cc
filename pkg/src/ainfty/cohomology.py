"""Cohomology categories and the three notions of unit.

Over a field the cohomology of each hom complex is computed by Gaussian
elimination with a deterministic choice of representing cocycles, and the
induced composition is verified associative on the requested window.
Unit checks run in increasing strength: strict units are verified when
designated and solved for otherwise, cohomological units are solved for
as closed degree-0 elements acting as the identity on cohomology, and
unitality homotopies come from the linear equation d h + h d = action - id.
Over the integers the same systems are decided through the Smith normal
form, so verdicts stay exact; user witnesses are accepted and verified.
"""

from .errors import SchemaError, UnsupportedRing
from .graded import GradedModule
from .lincomb import add_into, add_lin
from .linalg import SparseMatrix, rank_kernel, solve_integer, solve_linear
from .structures import GradedCategory


def _solve(ring, M, b):
    if ring.is_field:
        return solve_linear(M, b)
    return solve_integer(M, b)


def _m2_apply(A, lin_left, lin_right):
    """m2 on two letter combinations; {lid: coeff}."""
    R = A.ring
    m = A.unshifted_ops()
    out = {}
    for l2, c2 in lin_left.items():
        for l1, c1 in lin_right.items():
            col = m.get((l2, l1))
            if col:
                add_lin(out, col, R, factor=R.mul(c2, c1))
    return out


def _m1_matrix(A, pair, deg):
    """Matrix of m1 from degree deg to deg+1 on the given hom pair."""
    Q, R = A.quiver, A.ring
    m = A.unshifted_ops()
    src = [l for l in Q.pair_lids[pair] if Q.deg(l) == deg]
    tgt = [l for l in Q.pair_lids[pair] if Q.deg(l) == deg + 1]
    tgt_index = {l: i for i, l in enumerate(tgt)}
    M = SparseMatrix(R, len(tgt), len(src))
    for j, l in enumerate(src):
        col = m.get((l,))
        if col:
            for out, c in col.items():
                M[tgt_index[out], j] = c
    return src, tgt, M


class HomologyBasis:
    """Chosen cocycle representatives and the class-coordinate projector
    for one hom pair in one degree, over a field."""

    def __init__(self, A, pair, deg):
        Q, R = A.quiver, A.ring
        self.R = R
        self.pair = pair
        self.deg = deg
        src, _, M = _m1_matrix(A, pair, deg)
        self.src = src
        self.src_index = {l: i for i, l in enumerate(src)}
        _, cocycles = rank_kernel(M)
        m = A.unshifted_ops()
        boundaries = []
        for l in Q.pair_lids[pair]:
            if Q.deg(l) != deg - 1:
                continue
            col = m.get((l,))
            if col:
                boundaries.append({self.src_index[out]: c for out, c in col.items()})
        self.boundaries = boundaries
        # greedily keep cocycles independent modulo the boundaries
        reps = []
        span = list(boundaries)
        base_rank = self._rank(span)
        for v in cocycles:
            if self._rank(span + [v]) > base_rank + len(reps):
                reps.append(v)
                span.append(v)
        self.reps = reps

    def _rank(self, vecs):
        M = SparseMatrix(self.R, len(self.src), len(vecs))
        for j, v in enumerate(vecs):
            for i, c in v.items():
                M[i, j] = c
        r, _ = rank_kernel(M)
        return r

    @property
    def dim(self):
        return len(self.reps)

    def rep_lincomb(self, i):
        return {self.src[j]: c for j, c in self.reps[i].items()}

    def classify(self, lin):
        """Coordinates of a closed element's class in the chosen basis;
        None if the element does not lie in cocycles + boundaries."""
        R = self.R
        cols = self.reps + self.boundaries
        M = SparseMatrix(R, len(self.src), len(cols))
        for j, v in enumerate(cols):
            for i, c in v.items():
                M[i, j] = c
        b = {}
        for lid, c in lin.items():
            if lid not in self.src_index:
                if not R.is_zero(c):
                    return None
                continue
            b[self.src_index[lid]] = c
        x = solve_linear(M, b)
        if x is None:
            return None
        return {
            i: c for i, c in x.items() if i < len(self.reps) and not R.is_zero(c)
        }


def cohomology(A, degree_window):
    """The cohomology category on a degree window, over a field.

    Per-degree homology dimensions with the composition induced by the
    binary operation, verified associative wherever all three pairwise
    composites stay inside the window.
    """
    R = A.ring
    if not R.is_field:
        raise UnsupportedRing("cohomology tables need field coefficients")
    d_min, d_max = degree_window
    Q = A.quiver
    bases = {}
    hom = {}
    for a in Q.objects:
        for b in Q.objects:
            items = []
            for d in range(d_min, d_max + 1):
                hb = HomologyBasis(A, (a, b), d)
                bases[(a, b, d)] = hb
                for i in range(hb.dim):
                    items.append(((d, i), d))
            hom[(a, b)] = GradedModule(items)
    comp = {}
    for a in Q.objects:
        for b in Q.objects:
            for c in Q.objects:
                for (dg, ig), _ in hom[(b, c)].items:
                    for (df, jf), _ in hom[(a, b)].items:
                        if not (d_min <= dg + df <= d_max):
                            continue
                        prod = _m2_apply(
                            A,
                            bases[(b, c, dg)].rep_lincomb(ig),
                            bases[(a, b, df)].rep_lincomb(jf),
                        )
                        coords = bases[(a, c, dg + df)].classify(prod)
                        if coords is None:
                            raise SchemaError("composite of cocycles not closed")
                        if coords:
                            comp[((dg, ig), (df, jf))] = {
                                (dg + df, i): cc for i, cc in coords.items()
                            }
    H = GradedCategory(R, list(Q.objects), hom, comp, ids={})
    _verify_associative(H, d_min, d_max)
    return H


def _verify_associative(H, d_min, d_max):
    R = H.ring
    for a in H.objects:
        for b in H.objects:
            for c in H.objects:
                for e in H.objects:
                    for (h, _) in H.hom[(c, e)].items:
                        for (g, _) in H.hom[(b, c)].items:
                            for (f, _) in H.hom[(a, b)].items:
                                if not (
                                    d_min <= h[0] + g[0] <= d_max
                                    and d_min <= g[0] + f[0] <= d_max
                                    and d_min <= h[0] + g[0] + f[0] <= d_max
                                ):
                                    continue
                                lhs = {}
                                for k, ck in H.compose(h, g).items():
                                    for l, cl in H.compose(k, f).items():
                                        add_into(lhs, l, R.mul(ck, cl), R)
                                rhs = {}
                                for k, ck in H.compose(g, f).items():
                                    for l, cl in H.compose(h, k).items():
                                        add_into(rhs, l, R.mul(ck, cl), R)
                                if lhs != rhs:
                                    raise SchemaError(
                                        "induced composition fails associativity"
                                    )


# ---------------------------------------------------------------------------
# unit checks
# ---------------------------------------------------------------------------

def _unit_contexts(A, obj):
    """Group arity != 2 table entries by the word with one endomorphism
    slot blanked out; substituting a unit combination into the blank must
    give zero for strict unitality."""
    Q = A.quiver
    m = A.unshifted_ops()
    contexts = {}
    for word, col in m.items():
        if len(word) == 2:
            continue
        for pos, l in enumerate(word):
            if Q.src(l) == obj and Q.tgt(l) == obj and Q.deg(l) == 0:
                key = (word[:pos], word[pos + 1 :])
                contexts.setdefault(key, []).append((l, col))
    return contexts


def _verify_strict_unit(A, obj, lin):
    """Exact check of the two strict-unit axioms for a degree-0 combo."""
    Q, R = A.quiver, A.ring
    m = A.unshifted_ops()
    if not lin:
        # the zero element is a unit only for a hom-less object
        return all(
            not Q.pair_lids[(obj, o)] and not Q.pair_lids[(o, obj)]
            for o in Q.objects
        )
    if any(Q.deg(l) != 0 or Q.src(l) != obj or Q.tgt(l) != obj for l in lin):
        return False
    for other in Q.objects:
        for f in Q.pair_lids[(obj, other)]:
            acc = {}
            for u, cu in lin.items():
                col = m.get((f, u))
                if col:
                    add_lin(acc, col, R, factor=cu)
            if acc != {f: R.one()}:
                return False
        for f in Q.pair_lids[(other, obj)]:
            acc = {}
            for u, cu in lin.items():
                col = m.get((u, f))
                if col:
                    add_lin(acc, col, R, factor=cu)
            if acc != {f: R.one()}:
                return False
    for (pre, post), entries in _unit_contexts(A, obj).items():
        acc = {}
        for l, col in entries:
            cu = lin.get(l)
            if cu is not None:
                add_lin(acc, col, R, factor=cu)
        if acc:
            return False
    return True


def find_strict_unit(A, obj):
    """Designated unit if it verifies, else a solved-for strict unit."""
    Q, R = A.quiver, A.ring
    lin = A.units.get(obj)
    if lin is not None and _verify_strict_unit(A, obj, lin):
        return lin
    if all(
        not Q.pair_lids[(obj, o)] and not Q.pair_lids[(o, obj)] for o in Q.objects
    ):
        return {}
    m = A.unshifted_ops()
    candidates = [l for l in Q.pair_lids[(obj, obj)] if Q.deg(l) == 0]
    if not candidates:
        return None
    cand_index = {l: j for j, l in enumerate(candidates)}
    eq_index = {}
    rows = []
    rhs = {}

    def eqr(key):
        if key not in eq_index:
            eq_index[key] = len(rows)
            rows.append({})
        return eq_index[key]

    for other in Q.objects:
        for f in Q.pair_lids[(obj, other)]:
            for j, u in enumerate(candidates):
                for out, c in m.get((f, u), {}).items():
                    i = eqr(("r", f, out))
                    rows[i][j] = R.add(rows[i].get(j, R.zero()), c)
            rhs[eqr(("r", f, f))] = R.one()
        for f in Q.pair_lids[(other, obj)]:
            for j, u in enumerate(candidates):
                for out, c in m.get((u, f), {}).items():
                    i = eqr(("l", f, out))
                    rows[i][j] = R.add(rows[i].get(j, R.zero()), c)
            rhs[eqr(("l", f, f))] = R.one()
    for ctx, entries in _unit_contexts(A, obj).items():
        for l, col in entries:
            j = cand_index.get(l)
            if j is None:
                continue
            for out, c in col.items():
                i = eqr(("z", ctx, out))
                rows[i][j] = R.add(rows[i].get(j, R.zero()), c)
    M = SparseMatrix(R, len(rows), len(candidates))
    for i, row in enumerate(rows):
        for j, c in row.items():
            M[i, j] = c
    try:
        x = _solve(R, M, rhs)
    except UnsupportedRing:
        return None
    if x is None:
        return None
    lin = {candidates[j]: c for j, c in x.items() if not R.is_zero(c)}
    return lin if _verify_strict_unit(A, obj, lin) else None


def unit_checks(A, witnesses=None):
    """Strict / cohomological / unital verdicts with witnesses.

    A strict unit family makes the other two verdicts immediate (the
    homotopies are zero).  Cohomological units and unitality homotopies
    are solved for over a field and decided through the Smith form over
    Z; supplied witnesses are verified instead of solved for.
    """
    Q = A.quiver
    witnesses = witnesses or {}
    report = {}
    strict_units = {}
    for obj in Q.objects:
        u = find_strict_unit(A, obj)
        if u is None:
            strict_units = None
            break
        strict_units[obj] = u
    if strict_units is not None:
        report["strict"] = True
        report["strict_units"] = strict_units
        report["cohomological"] = {k: dict(v) for k, v in strict_units.items()}
        report["unital"] = {"units": report["cohomological"], "homotopies": {}}
        return report
    report["strict"] = False
    cohom = witnesses.get("cohomological")
    if cohom is not None:
        if not _verify_cohomological_units(A, cohom):
            report["cohomological"] = None
            report["unital"] = None
            return report
    else:
        cohom = _find_cohomological_units(A)
    report["cohomological"] = cohom
    if cohom is None:
        report["unital"] = None
        return report
    found = _find_unitality_homotopies(A, cohom, witnesses.get("homotopies"))
    report["unital"] = (
        None if found is None else {"units": cohom, "homotopies": found}
    )
    return report


def _closed_subspace(A, pair, deg):
    src, _, M = _m1_matrix(A, pair, deg)
    _, ker = rank_kernel(M)
    return src, ker


def _action_defect_rows(A, obj, closed_basis, pair, deg, side):
    """For each closed element z of the pair in this degree: the linear
    expression action(z, e) - z in the unknown unit coefficients, plus the
    boundary slots available in the degree."""
    Q, R = A.quiver, A.ring
    zsrc, zker = _closed_subspace(A, pair, deg)
    out = []
    for zvec in zker:
        zlin = {zsrc[i]: c for i, c in zvec.items()}
        per_candidate = []
        for e in closed_basis:
            act = (
                _m2_apply(A, zlin, e) if side == "right" else _m2_apply(A, e, zlin)
            )
            per_candidate.append(act)
        out.append((zlin, per_candidate))
    return out


def _find_cohomological_units(A):
    """Closed degree-0 elements acting as the identity on cohomology.

    One joint linear system per object: unknowns are the coefficients of
    the unit over the closed degree-0 basis together with one primitive
    per closed test element, expressing that each action defect is a
    boundary.  Decidable over fields and over Z (Smith form)."""
    Q, R = A.quiver, A.ring
    m = A.unshifted_ops()
    out = {}
    for obj in Q.objects:
        if all(
            not Q.pair_lids[(obj, o)] and not Q.pair_lids[(o, obj)]
            for o in Q.objects
        ):
            out[obj] = {}
            continue
        src0, ker0 = _closed_subspace(A, (obj, obj), 0)
        closed_basis = [{src0[i]: c for i, c in v.items()} for v in ker0]
        if not closed_basis:
            return None
        eq_index = {}
        rows = []
        rhs = {}

        def eqr(key):
            if key not in eq_index:
                eq_index[key] = len(rows)
                rows.append({})
            return eq_index[key]

        n_e = len(closed_basis)
        slot_count = n_e
        for other in Q.objects:
            for side in ("right", "left"):
                pair = (obj, other) if side == "right" else (other, obj)
                degs = sorted({Q.deg(l) for l in Q.pair_lids[pair]})
                for deg in degs:
                    tests = _action_defect_rows(
                        A, obj, closed_basis, pair, deg, side
                    )
                    bsrc = [
                        l for l in Q.pair_lids[pair] if Q.deg(l) == deg - 1
                    ]
                    for zi, (zlin, per_candidate) in enumerate(tests):
                        tag = (pair, side, deg, zi)
                        for j, act in enumerate(per_candidate):
                            for lid, c in act.items():
                                i = eqr(tag + (lid,))
                                rows[i][j] = R.add(
                                    rows[i].get(j, R.zero()), c
                                )
                        for lid, c in zlin.items():
                            rhs[eqr(tag + (lid,))] = c
                        for bl in bsrc:
                            col = m.get((bl,), {})
                            if not col:
                                continue
                            j = slot_count
                            slot_count += 1
                            for lid, c in col.items():
                                i = eqr(tag + (lid,))
                                rows[i][j] = R.add(
                                    rows[i].get(j, R.zero()), R.neg(c)
                                )
        M = SparseMatrix(R, len(rows), slot_count)
        for i, row in enumerate(rows):
            for j, c in row.items():
                M[i, j] = c
        try:
            x = _solve(R, M, rhs)
        except UnsupportedRing:
            return None
        if x is None:
            return None
        e = {}
        for j, c in x.items():
            if j < n_e and not R.is_zero(c):
                for lid, cc in closed_basis[j].items():
                    add_into(e, lid, R.mul(c, cc), R)
        out[obj] = e
    return out


def _verify_cohomological_units(A, units):
    """Check closedness and that the action defects are boundaries."""
    Q, R = A.quiver, A.ring
    m = A.unshifted_ops()
    for obj, e in units.items():
        d_e = {}
        for lid, c in e.items():
            if Q.deg(lid) != 0 or Q.src(lid) != obj or Q.tgt(lid) != obj:
                return False
            add_lin(d_e, m.get((lid,), {}), R, factor=c)
        if d_e:
            return False
        for other in Q.objects:
            for side in ("right", "left"):
                pair = (obj, other) if side == "right" else (other, obj)
                degs = sorted({Q.deg(l) for l in Q.pair_lids[pair]})
                for deg in degs:
                    zsrc, zker = _closed_subspace(A, pair, deg)
                    bsrc = [
                        l for l in Q.pair_lids[pair] if Q.deg(l) == deg - 1
                    ]
                    for zvec in zker:
                        zlin = {zsrc[i]: c for i, c in zvec.items()}
                        act = (
                            _m2_apply(A, zlin, e)
                            if side == "right"
                            else _m2_apply(A, e, zlin)
                        )
                        for lid, c in zlin.items():
                            add_into(act, lid, R.neg(c), R)
                        # act must be a boundary
                        cols = [m.get((bl,), {}) for bl in bsrc]
                        tgts = sorted(
                            {t for col in cols for t in col} | set(act), key=str
                        )
                        ti = {t: i for i, t in enumerate(tgts)}
                        M = SparseMatrix(R, len(tgts), len(cols))
                        for j, col in enumerate(cols):
                            for t, c in col.items():
                                M[ti[t], j] = c
                        b = {ti[t]: c for t, c in act.items()}
                        try:
                            if _solve(R, M, b) is None:
                                return False
                        except UnsupportedRing:
                            return False
    return True


def _hom_diff(A, pair):
    m = A.unshifted_ops()
    return {l: m.get((l,), {}) for l in A.quiver.pair_lids[pair]}


def _verify_homotopy_square(A, pair, h, defect):
    """Exact check of d h + h d = defect, maps as {src: {tgt: coeff}}."""
    R = A.ring
    d = _hom_diff(A, pair)
    for f in A.quiver.pair_lids[pair]:
        acc = {}
        for mid, c in h.get(f, {}).items():
            add_lin(acc, d.get(mid, {}), R, factor=c)
        for mid, c in d.get(f, {}).items():
            add_lin(acc, h.get(mid, {}), R, factor=c)
        if acc != defect.get(f, {}):
            return False
    return True


def _solve_homotopy_square(A, pair, defect):
    """Solve d h + h d = defect for a degree -1 map h on a hom pair."""
    Q, R = A.quiver, A.ring
    lids = Q.pair_lids[pair]
    slots = [(f, g) for f in lids for g in lids if Q.deg(g) == Q.deg(f) - 1]
    d = _hom_diff(A, pair)
    eq_index = {}
    rows = []

    def eqr(f, tgt):
        key = (f, tgt)
        if key not in eq_index:
            eq_index[key] = len(rows)
            rows.append({})
        return eq_index[key]

    b = {}
    for f, col in defect.items():
        for tgt, c in col.items():
            b[eqr(f, tgt)] = c
    for j, (f, g) in enumerate(slots):
        for tgt, c in d.get(g, {}).items():
            i = eqr(f, tgt)
            rows[i][j] = R.add(rows[i].get(j, R.zero()), c)
        for src, col in d.items():
            c0 = col.get(f)
            if c0 is not None and not R.is_zero(c0):
                i = eqr(src, g)
                rows[i][j] = R.add(rows[i].get(j, R.zero()), c0)
    M = SparseMatrix(R, len(rows), len(slots))
    for i, row in enumerate(rows):
        for j, c in row.items():
            M[i, j] = c
    try:
        x = _solve(R, M, b)
    except UnsupportedRing:
        return None
    if x is None:
        return None
    h = {}
    for j, c in x.items():
        f, g = slots[j]
        if not R.is_zero(c):
            h.setdefault(f, {})[g] = c
    return h


def _find_unitality_homotopies(A, units, supplied=None):
    """For each object pair and side, an h with d h + h d = action - id,
    solved for or taken from `supplied` and verified."""
    Q, R = A.quiver, A.ring
    out = {}
    for obj in Q.objects:
        e = units[obj]
        for other in Q.objects:
            for side in ("right", "left"):
                pair = (obj, other) if side == "right" else (other, obj)
                lids = Q.pair_lids[pair]
                if not lids:
                    continue
                key = (obj, other, side)
                defect = {}
                for f in lids:
                    act = (
                        _m2_apply(A, {f: R.one()}, e)
                        if side == "right"
                        else _m2_apply(A, e, {f: R.one()})
                    )
                    add_into(act, f, R.neg(R.one()), R)
                    if act:
                        defect[f] = act
                if supplied and key in supplied:
                    if not _verify_homotopy_square(A, pair, supplied[key], defect):
                        return None
                    out[key] = supplied[key]
                    continue
                h = _solve_homotopy_square(A, pair, defect)
                if h is None:
                    return None
                if h:
                    out[key] = h
    return out
