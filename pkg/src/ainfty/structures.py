"""A-infinity structures, functors and prenatural transformations.

Operations are stored canonically in shifted (bar-side) form: the table
``b`` maps a word (display-order tuple of letter ids) to the letter
expansion of b_arity(word), a map of degree +1 on the suspended side.
The coderivation built from these tables has uniform Koszul-only signs;
the exotic sign exponents of the literal associativity relation live
solely in the unshifted convertors and the literal checkers.

Functor components are stored unshifted (degree 1-i tables), matching the
literal relation checkers and the unit-strictification formulas; shifted
components (which are sign-free to compose) are derived on demand.
Prenatural transformations are stored unshifted throughout.
"""

from .errors import ArityUnderflow, DegreeMismatch, RingMismatch, SchemaError
from .graded import shift_sign
from .lincomb import add_into, add_lin


def _convert_table(ring, quiver, table, degree_of_arity):
    """Word-wise shift/unshift of an operation table (its own inverse)."""
    out = {}
    for word, col in table.items():
        degs = [quiver.deg(l) for l in word]
        sign = shift_sign(degs, degree_of_arity(len(word)))
        if sign == 1:
            out[word] = dict(col)
        else:
            out[word] = {k: ring.neg(c) for k, c in col.items()}
    return out


class AInftyStructure:
    def __init__(self, ring, quiver, max_arity, b=None, units=None, name=""):
        self.ring = ring
        self.quiver = quiver
        self.max_arity = max_arity
        self.b = b or {}
        self.units = dict(units or {})  # object -> {lid: coeff}, optional
        self.name = name
        self._m_cache = None

    # -- construction ----------------------------------------------------
    @classmethod
    def from_unshifted(cls, ring, quiver, max_arity, ops, units=None, name=""):
        """ops: {word: {out_lid: coeff}} holding the degree 2-i operations."""
        b = _convert_table(ring, quiver, ops, lambda i: 2 - i)
        A = cls(ring, quiver, max_arity, b, units=units, name=name)
        A.validate()
        return A

    def unshifted_ops(self):
        if self._m_cache is None:
            self._m_cache = _convert_table(
                self.ring, self.quiver, self.b, lambda i: 2 - i
            )
        return self._m_cache

    def validate(self):
        Q = self.quiver
        for word, col in self.b.items():
            if not word:
                raise SchemaError("empty operation word")
            if len(word) > self.max_arity:
                raise SchemaError(
                    f"operation of arity {len(word)} exceeds bound {self.max_arity}"
                )
            if not Q.word_composable(word):
                raise SchemaError(f"word {Q.word_names(word)} is not composable")
            want = Q.word_deg(word) + 2 - len(word)
            for out in col:
                if Q.src(out) != Q.word_src(word) or Q.tgt(out) != Q.word_tgt(word):
                    raise SchemaError(
                        f"operation output {Q.name(out)} has wrong source/target"
                    )
                if Q.deg(out) != want:
                    raise DegreeMismatch(
                        f"m_{len(word)} on {Q.word_names(word)}: output degree "
                        f"{Q.deg(out)} != {want}"
                    )
        for obj, lin in self.units.items():
            for lid in lin:
                if Q.src(lid) != obj or Q.tgt(lid) != obj or Q.deg(lid) != 0:
                    raise SchemaError(f"bad designated unit for {obj}")
        return self

    # -- evaluation (shifted side) ----------------------------------------
    def b_apply(self, word):
        return self.b.get(word)

    def coderivation(self, word):
        """d(word) as {word: coeff}: sum over windows of the interior b_k,
        Koszul sign from the deg' of the letters left of the window."""
        R, Q = self.ring, self.quiver
        n = len(word)
        out = {}
        left_degp = 0
        for a in range(n):
            for k in range(1, min(self.max_arity, n - a) + 1):
                col = self.b.get(word[a : a + k])
                if col:
                    sign = -1 if left_degp % 2 else 1
                    pre, post = word[:a], word[a + k :]
                    for lid, c in col.items():
                        add_into(
                            out,
                            pre + (lid,) + post,
                            c if sign == 1 else R.neg(c),
                            R,
                        )
            left_degp += Q.degp(word[a])
        return out

    def stasheff_residual(self, word):
        """Corestriction of d o d to one letter, evaluated on a word: the
        shifted-coderivation residual (vanishes iff the relation holds)."""
        R = self.ring
        out = {}
        for w1, c1 in self.coderivation(word).items():
            col = self.b.get(w1)
            if col:
                add_lin(out, col, R, factor=c1)
        return out

    def m_apply(self, word):
        """Unshifted operation table lookup."""
        return self.unshifted_ops().get(word)

    # -- units -----------------------------------------------------------
    def unit_of(self, obj):
        return self.units.get(obj)

    def unit_letter(self, obj):
        """The designated unit when it is a single basis letter, else None."""
        lin = self.units.get(obj)
        if lin and len(lin) == 1:
            lid, c = next(iter(lin.items()))
            if c == self.ring.one():
                return lid
        return None

    def is_dg(self):
        return all(len(w) <= 2 for w in self.b)

    def copy(self):
        return AInftyStructure(
            self.ring,
            self.quiver,
            self.max_arity,
            {w: dict(col) for w, col in self.b.items()},
            units=self.units,
            name=self.name,
        )


class AInftyFunctor:
    def __init__(self, source, target, obj_map, comps, max_arity, name=""):
        """comps: {word in source: {target lid: coeff}}, unshifted (degree 1-i)."""
        if source.ring != target.ring:
            raise RingMismatch(f"{source.ring} vs {target.ring}")
        self.source = source
        self.target = target
        self.ring = source.ring
        self.obj_map = dict(obj_map)
        self.comps = comps
        self.max_arity = max_arity
        self.name = name

    def validate(self):
        QA, QB = self.source.quiver, self.target.quiver
        for a in QA.objects:
            if a not in self.obj_map or self.obj_map[a] not in QB.objects:
                raise SchemaError(f"object map misses {a}")
        for word, col in self.comps.items():
            if not QA.word_composable(word):
                raise SchemaError(f"component word {QA.word_names(word)} not composable")
            if len(word) > self.max_arity:
                raise SchemaError(
                    f"component arity {len(word)} exceeds bound {self.max_arity}"
                )
            want = QA.word_deg(word) + 1 - len(word)
            fa = self.obj_map[QA.word_src(word)]
            fb = self.obj_map[QA.word_tgt(word)]
            for out in col:
                if QB.src(out) != fa or QB.tgt(out) != fb:
                    raise SchemaError(
                        f"component output {QB.name(out)} has wrong source/target"
                    )
                if QB.deg(out) != want:
                    raise DegreeMismatch(
                        f"F^{len(word)} on {QA.word_names(word)}: output degree "
                        f"{QB.deg(out)} != {want}"
                    )
        return self

    def component(self, word):
        return self.comps.get(word)

    def shifted_comps(self):
        """Degree-0 bar-side components (sign-free under composition)."""
        return _convert_table(
            self.ring, self.source.quiver, self.comps, lambda i: 1 - i
        )

    @classmethod
    def from_shifted(cls, source, target, obj_map, shifted, max_arity, name=""):
        comps = _convert_table(
            source.ring, source.quiver, shifted, lambda i: 1 - i
        )
        return cls(source, target, obj_map, comps, max_arity, name=name)

    @classmethod
    def identity(cls, A):
        comps = {}
        one = A.ring.one()
        for lid in range(A.quiver.n_letters):
            comps[(lid,)] = {lid: one}
        return cls(A, A, {o: o for o in A.quiver.objects}, comps, A.max_arity, name="id")

    def is_strict(self):
        return all(len(w) == 1 for w in self.comps)

    def copy(self):
        return AInftyFunctor(
            self.source,
            self.target,
            self.obj_map,
            {w: dict(col) for w, col in self.comps.items()},
            self.max_arity,
            name=self.name,
        )


class Prenat:
    def __init__(self, src_fun, dst_fun, degree, comps0=None, comps=None, name=""):
        """Prenatural transformation src_fun -> dst_fun of the given degree.

        comps0: {object: {target lid: coeff}} holds the arity-0 family;
        comps: {word: {target lid: coeff}} the arity >= 1 components,
        unshifted (degree p-i).
        """
        if (src_fun.source is not dst_fun.source) or (
            src_fun.target is not dst_fun.target
        ):
            raise SchemaError("prenat endpoints must be parallel functors")
        self.src_fun = src_fun
        self.dst_fun = dst_fun
        self.ring = src_fun.ring
        self.degree = degree
        self.comps0 = comps0 or {}
        self.comps = comps or {}
        self.name = name

    def validate(self):
        QA = self.src_fun.source.quiver
        QB = self.src_fun.target.quiver
        for obj, lin in self.comps0.items():
            fa, ga = self.src_fun.obj_map[obj], self.dst_fun.obj_map[obj]
            for out in lin:
                if QB.src(out) != fa or QB.tgt(out) != ga:
                    raise SchemaError("theta^0 lands in the wrong hom module")
                if QB.deg(out) != self.degree:
                    raise DegreeMismatch(
                        f"theta^0 at {obj}: degree {QB.deg(out)} != {self.degree}"
                    )
        for word, col in self.comps.items():
            want = QA.word_deg(word) + self.degree - len(word)
            fa = self.src_fun.obj_map[QA.word_src(word)]
            ga = self.dst_fun.obj_map[QA.word_tgt(word)]
            for out in col:
                if QB.src(out) != fa or QB.tgt(out) != ga:
                    raise SchemaError("component lands in the wrong hom module")
                if QB.deg(out) != want:
                    raise DegreeMismatch(
                        f"theta^{len(word)}: output degree {QB.deg(out)} != {want}"
                    )
        return self

    def component(self, word):
        return self.comps.get(word)

    def at_object(self, obj):
        return self.comps0.get(obj, {})

    def is_zero(self):
        return not self.comps0 and not self.comps

    def copy(self):
        return Prenat(
            self.src_fun,
            self.dst_fun,
            self.degree,
            {o: dict(l) for o, l in self.comps0.items()},
            {w: dict(c) for w, c in self.comps.items()},
            name=self.name,
        )

    def plus(self, other, sign=1):
        if other.degree != self.degree:
            raise DegreeMismatch("cannot add prenats of different degrees")
        out = self.copy()
        R = self.ring
        for obj, lin in other.comps0.items():
            dst = out.comps0.setdefault(obj, {})
            for k, c in lin.items():
                add_into(dst, k, c if sign == 1 else R.neg(c), R)
            if not dst:
                out.comps0.pop(obj, None)
        for w, col in other.comps.items():
            dst = out.comps.setdefault(w, {})
            for k, c in col.items():
                add_into(dst, k, c if sign == 1 else R.neg(c), R)
            if not dst:
                out.comps.pop(w, None)
        return out


class GradedCategory:
    """Strictly associative unital graded category (the cohomology category).

    hom: {(a, b): GradedModule over class labels};
    comp: {(g_label, f_label): {label: coeff}} for composable class pairs;
    ids: {object: label}.
    """

    def __init__(self, ring, objects, hom, comp, ids):
        self.ring = ring
        self.objects = objects
        self.hom = hom
        self.comp = comp
        self.ids = ids

    def dim(self, a, b, deg=None):
        mod = self.hom[(a, b)]
        if deg is None:
            return mod.rank
        return sum(1 for _, d in mod.items if d == deg)

    def compose(self, g, f):
        """Compose single class labels; returns {label: coeff}."""
        return dict(self.comp.get((g, f), {}))
