"""Graded quivers: object sets with free graded hom modules and word bases.

Letters (hom basis elements) are interned to integer ids.  A word is a
tuple of letter ids in display order: the tuple (f_i, ..., f_1) denotes
the tensor f_i (x) ... (x) f_1 where f_1 is the first morphism of the
composable chain, so index 0 holds the leftmost (last-applied) letter.
"""

from .errors import SchemaError
from .graded import GradedModule


class GradedQuiver:
    def __init__(self, objects, hom):
        """objects: iterable of names; hom: {(src, tgt): [(name, deg), ...]}."""
        self.objects = list(objects)
        if len(set(self.objects)) != len(self.objects):
            raise SchemaError("duplicate object names")
        oset = set(self.objects)
        self.hom = {}
        for pair in hom:
            if pair[0] not in oset or pair[1] not in oset:
                raise SchemaError(f"hom pair {pair} references unknown object")
        for a in self.objects:
            for b in self.objects:
                self.hom[(a, b)] = GradedModule(hom.get((a, b), []))
        # interning
        self.letter_src = []
        self.letter_tgt = []
        self.letter_name = []
        self.letter_deg = []
        self.lid = {}
        self.pair_lids = {}
        for a in self.objects:
            for b in self.objects:
                lids = []
                for name, deg in self.hom[(a, b)].items:
                    i = len(self.letter_name)
                    self.lid[(a, b, name)] = i
                    self.letter_src.append(a)
                    self.letter_tgt.append(b)
                    self.letter_name.append(name)
                    self.letter_deg.append(deg)
                    lids.append(i)
                self.pair_lids[(a, b)] = lids
        self.out_lids = {a: [] for a in self.objects}
        for i, a in enumerate(self.letter_src):
            self.out_lids[a].append(i)

    # letter accessors -------------------------------------------------
    def deg(self, lid):
        return self.letter_deg[lid]

    def degp(self, lid):
        return self.letter_deg[lid] + 1

    def src(self, lid):
        return self.letter_src[lid]

    def tgt(self, lid):
        return self.letter_tgt[lid]

    def name(self, lid):
        return self.letter_name[lid]

    def letter(self, src, tgt, name):
        key = (src, tgt, name)
        if key not in self.lid:
            raise SchemaError(f"no basis element {name!r} in hom({src}, {tgt})")
        return self.lid[key]

    @property
    def n_letters(self):
        return len(self.letter_name)

    # word helpers ------------------------------------------------------
    def word_src(self, word):
        return self.letter_src[word[-1]]

    def word_tgt(self, word):
        return self.letter_tgt[word[0]]

    def word_deg(self, word):
        return sum(self.letter_deg[l] for l in word)

    def word_degp(self, word):
        return sum(self.letter_deg[l] + 1 for l in word)

    def word_composable(self, word):
        return all(
            self.letter_src[word[k]] == self.letter_tgt[word[k + 1]]
            for k in range(len(word) - 1)
        )

    def word_names(self, word):
        return [self.letter_name[l] for l in word]

    def words(self, length, src=None, tgt=None):
        """All composable words of the given length (display order tuples)."""
        if length == 0:
            return
        starts = [src] if src is not None else self.objects
        for a in starts:
            stack = [((), a)]
            for _ in range(length):
                nxt = []
                for chain, at in stack:
                    for l in self.out_lids[at]:
                        nxt.append((chain + (l,), self.letter_tgt[l]))
                stack = nxt
            for chain, at in stack:
                if tgt is None or at == tgt:
                    # chain grew first-morphism-first; flip to display order
                    yield chain[::-1]

    def parse_word(self, path, names):
        """Word from an object path [A_0..A_i] and names [f_i, ..., f_1]."""
        i = len(names)
        if len(path) != i + 1:
            raise SchemaError(f"path length {len(path)} != arity {i} + 1")
        word = []
        for j, nm in enumerate(names):
            t = i - j  # letter f_t : A_{t-1} -> A_t
            word.append(self.letter(path[t - 1], path[t], nm))
        return tuple(word)
