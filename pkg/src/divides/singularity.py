"""Topological types of real plane curve singularities and their invariants.

A branch is recorded by its Puiseux characteristic exponents, a singularity
by its real branches, conjugate branch pairs, and the symmetric table of
pairwise intersection multiplicities.  All invariants (multiplicity
sequence, delta, Milnor number, node and region counts of a real
morsification) are exact integer computations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd


class InvalidSingularity(ValueError):
    """Raised when branch or intersection data violates a domain invariant."""


@dataclass(frozen=True)
class BranchType:
    """A branch germ given by its characteristic exponents (b0; b1, ..., bg).

    b0 is the multiplicity of the branch.  A smooth branch is encoded as
    ``(1,)``.  The gcd chain e_k = gcd(b0, ..., bk) must strictly decrease
    down to 1, which is exactly the condition for the listed exponents to be
    characteristic.
    """

    char_exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(v) for v in self.char_exponents)
        object.__setattr__(self, "char_exponents", exps)
        if not exps:
            raise InvalidSingularity("a branch needs at least the multiplicity exponent")
        if any(v < 1 for v in exps):
            raise InvalidSingularity(f"exponents must be positive: {exps}")
        if exps[0] == 1 and len(exps) > 1:
            raise InvalidSingularity("a smooth branch has no characteristic exponents beyond (1,)")
        if any(b >= c for b, c in zip(exps, exps[1:])):
            raise InvalidSingularity(f"exponents must be strictly increasing: {exps}")
        e = exps[0]
        for b in exps[1:]:
            if b % e == 0:
                raise InvalidSingularity(
                    f"{b} is divisible by the current gcd {e}; not a characteristic exponent"
                )
            e = gcd(e, b)
        if e != 1:
            raise InvalidSingularity(f"gcd chain of {exps} ends at {e}, expected 1")

    @property
    def multiplicity(self) -> int:
        return self.char_exponents[0]

    @property
    def is_smooth(self) -> bool:
        return self.char_exponents == (1,)


def multiplicity_sequence(b: BranchType) -> list[int]:
    """Multiplicities of the strict transforms of ``b`` under blow-ups.

    Runs the subtractive Euclidean expansion of the characteristic
    exponents: stage k processes the pair (current gcd, next exponent
    excess), appending min of the pair at each step.  The first entry is
    b0, the sequence is non-increasing, and it terminates with 1s once the
    transform is smooth and transversal to the exceptional locus.
    """
    if b.is_smooth:
        return [1]
    exps = b.char_exponents
    seq: list[int] = []
    a = exps[0]
    excesses = [exps[1]] + [exps[k + 1] - exps[k] for k in range(1, len(exps) - 1)]
    for y in excesses:
        x = a
        while y > 0:
            seq.append(min(x, y))
            if x <= y:
                y -= x
            else:
                x, y = y, x - y
        a = x
    return seq


def branch_delta(b: BranchType) -> int:
    """Delta invariant of a single branch: sum of m(m-1)/2 over its
    multiplicity sequence (the closed-form unrolling of the blow-up
    recursion for delta)."""
    return sum(m * (m - 1) // 2 for m in multiplicity_sequence(b))


@dataclass(frozen=True)
class SingularityType:
    """A real singularity: real branches, conjugate pairs, intersections.

    Branch slots are ordered: real branches first, then each conjugate pair
    contributes two slots (Q then its mirror).  ``intersections`` is the
    full symmetric matrix of pairwise intersection multiplicities over
    slots; the diagonal is unused and kept 0.
    """

    real_branches: tuple[BranchType, ...]
    conj_pairs: tuple[BranchType, ...]
    intersections: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "real_branches", tuple(self.real_branches))
        object.__setattr__(self, "conj_pairs", tuple(self.conj_pairs))
        n = self.slot_count
        if n == 0:
            raise InvalidSingularity("singularity needs at least one branch")
        table = tuple(tuple(int(v) for v in row) for row in self.intersections)
        if n == 1:
            table = table if table else ((0,),)
        if len(table) != n or any(len(row) != n for row in table):
            raise InvalidSingularity(f"intersection table must be {n}x{n}")
        object.__setattr__(self, "intersections", table)
        for i in range(n):
            if table[i][i] != 0:
                raise InvalidSingularity("diagonal of the intersection table is unused, keep 0")
            for j in range(i + 1, n):
                if table[i][j] != table[j][i]:
                    raise InvalidSingularity(f"intersection table not symmetric at ({i},{j})")
                if table[i][j] < 1:
                    raise InvalidSingularity(f"intersection ({i},{j}) must be >= 1")
                mi = self.slot_branch(i).multiplicity
                mj = self.slot_branch(j).multiplicity
                if table[i][j] < mi * mj:
                    raise InvalidSingularity(
                        f"intersection ({i},{j})={table[i][j]} below multiplicity bound {mi * mj}"
                    )
        # conjugation symmetry: the table must be invariant under swapping
        # each pair slot with its mirror
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                mi, mj = self.mirror_slot(i), self.mirror_slot(j)
                if mi == mj:
                    continue
                if table[i][j] != table[mi][mj]:
                    raise InvalidSingularity(
                        f"conjugation symmetry violated: ({i},{j})={table[i][j]} vs "
                        f"({mi},{mj})={table[mi][mj]}"
                    )

    @property
    def re_br(self) -> int:
        return len(self.real_branches)

    @property
    def im_br(self) -> int:
        return len(self.conj_pairs)

    @property
    def slot_count(self) -> int:
        return self.re_br + 2 * self.im_br

    def slot_branch(self, k: int) -> BranchType:
        if k < self.re_br:
            return self.real_branches[k]
        return self.conj_pairs[(k - self.re_br) // 2]

    def mirror_slot(self, k: int) -> int:
        """Slot of the complex-conjugate branch (fixed for real slots)."""
        if k < self.re_br:
            return k
        off = k - self.re_br
        return self.re_br + (off ^ 1)

    def pair_slots(self, p: int) -> tuple[int, int]:
        base = self.re_br + 2 * p
        return base, base + 1


def total_multiplicity(s: SingularityType) -> int:
    return sum(s.slot_branch(k).multiplicity for k in range(s.slot_count))


def delta_total(s: SingularityType) -> int:
    """Delta of the singularity: branch deltas plus pairwise intersections."""
    n = s.slot_count
    d = sum(branch_delta(s.slot_branch(k)) for k in range(n))
    d += sum(s.intersections[i][j] for i in range(n) for j in range(i + 1, n))
    return d


def milnor_number(s: SingularityType) -> int:
    """Milnor number via 2*delta - ReBr - 2*ImBr + 1."""
    return 2 * delta_total(s) - s.re_br - 2 * s.im_br + 1


def expected_node_count(s: SingularityType) -> int:
    """Number of hyperbolic nodes of any real morsification: delta - ImBr."""
    return delta_total(s) - s.im_br


def expected_inner_regions(s: SingularityType) -> int:
    """Number of inner complementary regions of the divide: mu - (delta - ImBr)."""
    return milnor_number(s) - expected_node_count(s)


# --- JSON wire format -------------------------------------------------------
#
# {"real_branches": [{"char_exponents": [...]}, ...],
#  "conj_pairs":    [{"char_exponents": [...]}, ...],
#  "intersections": {"i,j": k, ...}}
#
# Slot indexing: real branches first, then for each pair the Q slot followed
# by the conjugate slot.  Entries derivable by conjugation symmetry may be
# omitted; giving both with different values is an error.


def singularity_from_json(obj: dict) -> SingularityType:
    try:
        reals = tuple(BranchType(tuple(b["char_exponents"])) for b in obj.get("real_branches", []))
        pairs = tuple(BranchType(tuple(b["char_exponents"])) for b in obj.get("conj_pairs", []))
    except (KeyError, TypeError) as exc:
        raise InvalidSingularity(f"malformed branch entry: {exc}") from exc
    n = len(reals) + 2 * len(pairs)
    if n == 0:
        raise InvalidSingularity("empty branch list")

    def mirror(k: int) -> int:
        if k < len(reals):
            return k
        return len(reals) + ((k - len(reals)) ^ 1)

    given: dict[tuple[int, int], int] = {}
    for key, val in obj.get("intersections", {}).items():
        try:
            i_s, j_s = key.split(",")
            i, j = int(i_s), int(j_s)
        except ValueError as exc:
            raise InvalidSingularity(f"bad intersection key {key!r}, expected 'i,j'") from exc
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise InvalidSingularity(f"intersection key {key!r} out of range for {n} slots")
        pair = (min(i, j), max(i, j))
        if pair in given and given[pair] != int(val):
            raise InvalidSingularity(f"conflicting values for intersection {pair}")
        given[pair] = int(val)

    table = [[0] * n for _ in range(n)]
    seen = set(given)
    # close under conjugation symmetry, rejecting conflicts
    changed = True
    entries = dict(given)
    while changed:
        changed = False
        for (i, j), v in list(entries.items()):
            mi, mj = mirror(i), mirror(j)
            mpair = (min(mi, mj), max(mi, mj))
            if mpair not in entries:
                entries[mpair] = v
                changed = True
            elif entries[mpair] != v:
                raise InvalidSingularity(
                    f"intersection {(i, j)}={v} conflicts with conjugate entry {mpair}={entries[mpair]}"
                )
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in entries:
                raise InvalidSingularity(f"missing intersection entry for slots ({i},{j})")
            table[i][j] = table[j][i] = entries[(i, j)]
    del seen
    return SingularityType(reals, pairs, tuple(tuple(row) for row in table))


def singularity_to_json(s: SingularityType) -> dict:
    inter = {}
    for i in range(s.slot_count):
        for j in range(i + 1, s.slot_count):
            inter[f"{i},{j}"] = s.intersections[i][j]
    return {
        "real_branches": [{"char_exponents": list(b.char_exponents)} for b in s.real_branches],
        "conj_pairs": [{"char_exponents": list(b.char_exponents)} for b in s.conj_pairs],
        "intersections": inter,
    }


def invariants_report(s: SingularityType) -> dict:
    """All classical invariants in one dict (the CLI/service payload)."""
    return {
        "multiplicity": total_multiplicity(s),
        "delta": delta_total(s),
        "milnor": milnor_number(s),
        "re_br": s.re_br,
        "im_br": s.im_br,
        "expected_nodes": expected_node_count(s),
        "expected_inner_regions": expected_inner_regions(s),
        "branches": [
            {
                "slot": k,
                "kind": "real" if k < s.re_br else ("conj" if (k - s.re_br) % 2 == 0 else "conj_mirror"),
                "char_exponents": list(s.slot_branch(k).char_exponents),
                "multiplicity_sequence": multiplicity_sequence(s.slot_branch(k)),
                "delta": branch_delta(s.slot_branch(k)),
            }
            for k in range(s.slot_count)
        ],
    }
