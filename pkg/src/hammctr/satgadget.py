"""q-ary CNF model, regularization/balancing, and the reduction to the
continuous remotest-string problem, with brute-force oracles to certify the
satisfiable <-> remote threshold on small inputs.

Conventions: variables are 0-indexed internally (1-indexed in files); a
literal (v, a) means "X_v != a"; a clause is a disjunction of literals, so an
assignment falsifies a clause exactly when it pins every listed variable to
its forbidden value.  Assignments are enumerated with variable 0 as the most
significant digit, matching the candidate order of the continuous solvers.

The zero-forcing blocks used by regularization differ from the obvious
"pad the unique-assignment subformula" recipe: padding those clauses with
fresh disequalities lets assignments with several nonzero pad variables
satisfy every clause through the padding, which breaks equisatisfiability
for k >= 2.  Instead we emit, for overlapping windows of exactly 2k pad
variables spanning exactly k+1 pad groups, every width-2k clause except the
one ruling out all-zeros; the windows jointly force all pad variables to 0
and each window clause is already regular.
"""

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .core import StringSet, candidate_block
from .errors import BudgetError, FormatError

DEFAULT_SAT_CAP = 1 << 24
DEFAULT_FAMILY_CAP = 10**6
DEFAULT_GADGET_CAP = 1 << 22


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class QaryCnf:
    """(q, k)-CNF over q-ary variables with an optional size-s grouping.

    Groups, when present, are the contiguous index ranges
    [g*s, (g+1)*s); group_size must divide num_vars.
    """

    num_vars: int
    q: int
    clauses: tuple
    group_size: int | None = None

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("need at least one variable")
        if self.q < 2:
            raise ValueError("domain size must be at least 2")
        clauses = tuple(tuple((int(v), int(a)) for v, a in clause) for clause in self.clauses)
        for clause in clauses:
            if not clause:
                raise ValueError("clauses must be nonempty")
            for v, a in clause:
                if not 0 <= v < self.num_vars:
                    raise ValueError(f"variable {v} out of range")
                if not 0 <= a < self.q:
                    raise ValueError(f"forbidden value {a} out of range for q={self.q}")
        object.__setattr__(self, "clauses", clauses)
        if self.group_size is not None:
            if self.group_size < 1 or self.num_vars % self.group_size:
                raise ValueError(
                    f"group size {self.group_size} does not divide N={self.num_vars}"
                )

    @property
    def num_clauses(self):
        return len(self.clauses)

    @property
    def num_groups(self):
        if self.group_size is None:
            raise ValueError("formula carries no group partition")
        return self.num_vars // self.group_size

    def group_of(self, v):
        return v // self.group_size

    def with_groups(self, s):
        return QaryCnf(num_vars=self.num_vars, q=self.q, clauses=self.clauses, group_size=s)


@dataclass(frozen=True)
class RegularityWitness:
    """Every clause has exactly `k` literals spanning exactly `r` groups."""

    k: int
    r: int

    def validate(self, phi):
        if phi.group_size is None:
            return False
        for clause in phi.clauses:
            if len(clause) != self.k:
                return False
            if len({phi.group_of(v) for v, _ in clause}) != self.r:
                return False
        return True


def derive_witness(phi):
    """Witness of an already-regular grouped formula, or ValueError."""
    if phi.group_size is None:
        raise ValueError("formula carries no group partition")
    widths = {len(c) for c in phi.clauses}
    spans = {len({phi.group_of(v) for v, _ in c}) for c in phi.clauses}
    if len(widths) != 1 or len(spans) != 1:
        raise ValueError(f"formula is not regular: widths {widths}, group spans {spans}")
    return RegularityWitness(k=widths.pop(), r=spans.pop())


# ---------------------------------------------------------------------------
# file format: "p qcnf N M q", clause lines of v!a literals ended by 0


def parse_qcnf(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header = None
    clauses = []
    current = []
    declared = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 5 or parts[0] != "p" or parts[1] != "qcnf":
                raise FormatError(f"expected 'p qcnf N M q' header, got {line!r}", line=ln)
            try:
                n, m, q = int(parts[2]), int(parts[3]), int(parts[4])
            except ValueError:
                raise FormatError("non-integer header field", line=ln) from None
            header = (n, m, q)
            declared = m
            continue
        for tok in line.split():
            if tok == "0":
                if not current:
                    raise FormatError("empty clause", line=ln)
                clauses.append(tuple(current))
                current = []
                continue
            if "!" not in tok:
                raise FormatError(f"malformed literal {tok!r} (want v!a)", line=ln)
            vs, as_ = tok.split("!", 1)
            try:
                v, a = int(vs), int(as_)
            except ValueError:
                raise FormatError(f"malformed literal {tok!r}", line=ln) from None
            if not 1 <= v <= header[0]:
                raise FormatError(f"variable {v} out of range 1..{header[0]}", line=ln)
            if not 0 <= a < header[2]:
                raise FormatError(f"value {a} out of range 0..{header[2] - 1}", line=ln)
            current.append((v - 1, a))
    if header is None:
        raise FormatError("missing 'p qcnf' header", line=1)
    if current:
        raise FormatError("unterminated clause at end of file", line=ln)
    if len(clauses) != declared:
        raise FormatError(f"header declares {declared} clauses, found {len(clauses)}", line=ln)
    return QaryCnf(num_vars=header[0], q=header[2], clauses=tuple(clauses))


def write_qcnf(phi):
    lines = [f"p qcnf {phi.num_vars} {phi.num_clauses} {phi.q}"]
    for clause in phi.clauses:
        lines.append(" ".join(f"{v + 1}!{a}" for v, a in clause) + " 0")
    return "\n".join(lines) + "\n"


def formula_hash(phi):
    return hashlib.sha256(write_qcnf(phi).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# brute-force satisfiability


def _falsified_matrix(phi, symbols):
    """(B,) bool: assignment falsifies clause, for each clause; OR-reduced."""
    any_fals = np.zeros(symbols.shape[0], dtype=bool)
    for clause in phi.clauses:
        mask = np.ones(symbols.shape[0], dtype=bool)
        for v, a in clause:
            mask &= symbols[:, v] == a
        any_fals |= mask
    return any_fals


def satisfying_ids(phi, cap=DEFAULT_SAT_CAP):
    """All satisfying assignment ids, ascending (lexicographic order)."""
    total = phi.q**phi.num_vars
    if total > cap:
        raise BudgetError(f"q^N = {total} assignments exceed the cap of {cap}")
    out = []
    block = max(1, min(total, 1 << 18))
    for start in range(0, total, block):
        stop = min(start + block, total)
        symbols = candidate_block(start, stop, phi.num_vars, phi.q)
        good = ~_falsified_matrix(phi, symbols)
        if good.any():
            out.append(np.nonzero(good)[0].astype(np.int64) + start)
    if not out:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(out)


def brute_sat(phi, cap=DEFAULT_SAT_CAP):
    """First satisfying assignment in lexicographic order, or None."""
    total = phi.q**phi.num_vars
    if total > cap:
        raise BudgetError(f"q^N = {total} assignments exceed the cap of {cap}")
    block = max(1, min(total, 1 << 18))
    for start in range(0, total, block):
        stop = min(start + block, total)
        symbols = candidate_block(start, stop, phi.num_vars, phi.q)
        good = ~_falsified_matrix(phi, symbols)
        if good.any():
            row = symbols[int(np.argmax(good))]
            return tuple(int(x) for x in row)
    return None


def evaluate(phi, assignment):
    """True when the assignment satisfies every clause."""
    for clause in phi.clauses:
        if all(assignment[v] == a for v, a in clause):
            return False
    return True


# ---------------------------------------------------------------------------
# regularizing


def regularize(phi, s):
    """Equisatisfiable (q, 2k)-CNF that is (k+1)-regular for size-s groups.

    Pads the original variables to a multiple of s, appends k+1 fresh
    zero-forced blocks of s variables (each block one group), widens every
    original clause to exactly 2k literals over exactly k+1 groups with
    unsatisfiable pad literals, and adds the zero-forcing window clauses.
    """
    k = max(len(c) for c in phi.clauses) if phi.clauses else 1
    if not 2 * k <= s:
        raise ValueError(f"need s >= 2k, got s={s} k={k}")
    if s > phi.num_vars:
        raise ValueError(f"need s <= N, got s={s} N={phi.num_vars}")
    q = phi.q
    n_pad = ((phi.num_vars + s - 1) // s) * s
    y_base = n_pad
    n_new = n_pad + (k + 1) * s

    def y_var(row, block):
        return y_base + block * s + row

    clauses = []
    for clause in phi.clauses:
        w = len(clause)
        groups = {v // s for v, _ in clause}
        g = len(groups)
        add = 2 * k - w
        new_groups = k + 1 - g
        lits = list(clause)
        consumed = 0
        for b in range(new_groups - 1):
            lits.append((y_var(0, b), 0))
            consumed += 1
        rest = add - consumed
        for row in range(rest):
            lits.append((y_var(row, new_groups - 1), 0))
        clauses.append(tuple(lits))
    # zero-forcing windows: 2k pad variables over exactly k+1 pad blocks
    for i in range(s):
        window = [y_var(i, b) for b in range(k + 1)]
        window += [y_var((i + 1) % s, b) for b in range(k - 1)]
        for pattern_id in range(1, q ** (2 * k)):
            pattern = candidate_block(pattern_id, pattern_id + 1, 2 * k, q)[0]
            clauses.append(tuple((window[j], int(pattern[j])) for j in range(2 * k)))
    out = QaryCnf(num_vars=n_new, q=q, clauses=tuple(clauses), group_size=s)
    witness = RegularityWitness(k=2 * k, r=k + 1)
    if not witness.validate(out):
        raise AssertionError("regularizer produced a non-regular formula")
    return out, witness


# ---------------------------------------------------------------------------
# balancing


def family_size(phi):
    s = phi.group_size
    q = phi.q
    return ((s + 1) * (q - 1)) ** ((q - 1) * phi.num_vars // s)


def balance_permutations(phi, cap=DEFAULT_FAMILY_CAP):
    """Per-variable value relabelings of every family member, in sweep order.

    Member j's formula maps literal (v, a) to (v, perms[j, v, a]).  For each
    group and each staged value l = 0..q-2, the sweep exchanges l with every
    other value a over growing prefixes of the group (j = 0..s swapped
    variables), multiplying the family by (s+1)(q-1) per stage.
    """
    if phi.group_size is None:
        raise ValueError("balance needs a grouped formula")
    s = phi.group_size
    q = phi.q
    if s % q:
        raise ValueError(f"need q | s, got q={q} s={s}")
    t = family_size(phi)
    if t > cap:
        raise BudgetError(f"family size t = {t} exceeds the cap of {cap}")
    identity = np.tile(np.arange(q, dtype=np.uint8), (phi.num_vars, 1))
    members = [identity]
    for g in range(phi.num_groups):
        lo = g * s
        for ell in range(q - 1):
            new_members = []
            for perm in members:
                for a in range(q):
                    if a == ell:
                        continue
                    for j in range(s + 1):
                        p = perm.copy()
                        for v in range(lo, lo + j):
                            row = p[v].copy()
                            row[ell], row[a] = row[a], row[ell]
                            p[v] = row
                        new_members.append(p)
            members = new_members
    assert len(members) == t
    return np.stack(members) if members else np.empty((0, phi.num_vars, q), dtype=np.uint8)


def apply_value_maps(phi, perm):
    """Relabel literal values per variable; equisatisfiable by construction."""
    clauses = tuple(
        tuple((v, int(perm[v][a])) for v, a in clause) for clause in phi.clauses
    )
    return QaryCnf(num_vars=phi.num_vars, q=phi.q, clauses=clauses, group_size=phi.group_size)


def balance(phi, cap=DEFAULT_FAMILY_CAP):
    """The full t-member family of equisatisfiable value-relabeled formulas."""
    perms = balance_permutations(phi, cap=cap)
    return [apply_value_maps(phi, p) for p in perms]


def is_balanced(phi, assignment):
    """Whether the assignment gives each value exactly s/q slots per group."""
    s = phi.group_size
    q = phi.q
    arr = np.asarray(assignment)
    for g in range(phi.num_groups):
        part = arr[g * s : (g + 1) * s]
        counts = np.bincount(part, minlength=q)
        if not np.all(counts == s // q):
            return False
    return True


def balanced_mask(phi, symbols):
    """Vectorized is_balanced over rows of a (count, N) symbol array."""
    s = phi.group_size
    q = phi.q
    per = s // q
    mask = np.ones(symbols.shape[0], dtype=bool)
    for g in range(phi.num_groups):
        part = symbols[:, g * s : (g + 1) * s]
        for a in range(q):
            mask &= (part == a).sum(axis=1) == per
    return mask


# ---------------------------------------------------------------------------
# reduction to remotest string


@dataclass(frozen=True)
class GadgetInstance:
    """Produced remotest-string instance plus threshold and provenance."""

    strings: StringSet | None
    threshold: int
    q: int
    num_vars: int
    source_hash: str
    s: int
    r: int
    clause_width: int
    pre_dedup_count: int

    @property
    def num_strings(self):
        return 0 if self.strings is None else self.strings.n


def to_remotest(phi, witness=None, budget=DEFAULT_GADGET_CAP):
    """All clause-falsifying assignments that are constant on untouched groups.

    For each clause: pin its variables to the forbidden values, sweep the
    remaining positions of the touched groups freely, and one constant
    symbol per untouched group.  Threshold (q-1)(N - r*s)/q; divisibility is
    asserted, duplicates are removed (sorted order), and the pre-dedup count
    is retained.
    """
    if phi.group_size is None:
        raise ValueError("reduction needs a grouped formula")
    if witness is None:
        witness = derive_witness(phi)
    elif not witness.validate(phi):
        raise ValueError("witness does not describe this formula")
    q, s, big_n = phi.q, phi.group_size, phi.num_vars
    r = witness.r
    num = (q - 1) * (big_n - r * s)
    if num % q:
        raise ValueError(
            f"threshold (q-1)(N-rs)={num} not divisible by q={q}; "
            "regularize with q | s to guarantee divisibility"
        )
    threshold = num // q
    groups = phi.num_groups

    projected = 0
    plans = []
    for clause in phi.clauses:
        pins = {}
        ok = True
        for v, a in clause:
            if pins.get(v, a) != a:
                ok = False
                break
            pins[v] = a
        if not ok:
            continue  # tautological clause, no falsifying assignment
        touched = sorted({phi.group_of(v) for v in pins})
        free = [
            v
            for g in touched
            for v in range(g * s, (g + 1) * s)
            if v not in pins
        ]
        outside = [g for g in range(groups) if g not in set(touched)]
        count = (q ** len(free)) * (q ** len(outside))
        projected += count
        plans.append((pins, free, outside, count))
    if projected > budget:
        raise BudgetError(
            f"projected gadget size {projected} strings exceeds the budget of {budget}"
        )
    if not plans:
        return GadgetInstance(
            strings=None,
            threshold=threshold,
            q=q,
            num_vars=big_n,
            source_hash=formula_hash(phi),
            s=s,
            r=r,
            clause_width=witness.k,
            pre_dedup_count=0,
        )
    chunks = []
    for pins, free, outside, count in plans:
        nfill = q ** len(free)
        nout = q ** len(outside)
        block = np.zeros((nfill, nout, big_n), dtype=np.uint8)
        for v, a in pins.items():
            block[:, :, v] = a
        if free:
            fills = candidate_block(0, nfill, len(free), q)
            for j, v in enumerate(free):
                block[:, :, v] = fills[:, j : j + 1]
        if outside:
            outs = candidate_block(0, nout, len(outside), q)
            for j, g in enumerate(outside):
                for v in range(g * s, (g + 1) * s):
                    block[:, :, v] = outs[None, :, j]
        chunks.append(block.reshape(count, big_n))
    allrows = np.concatenate(chunks)
    if big_n * math.log2(q) <= 62:
        # dedup on packed assignment ids: far faster than row-sorting and
        # yields the same lexicographic order
        pw = np.array([q**j for j in range(big_n - 1, -1, -1)], dtype=np.int64)
        ids = np.unique(allrows.astype(np.int64) @ pw)
        dedup = _ids_to_symbols(ids, q, big_n)
    else:
        dedup = np.unique(allrows, axis=0)
    return GadgetInstance(
        strings=StringSet(n=dedup.shape[0], d=big_n, sigma=q, data=dedup),
        threshold=threshold,
        q=q,
        num_vars=big_n,
        source_hash=formula_hash(phi),
        s=s,
        r=r,
        clause_width=witness.k,
        pre_dedup_count=int(projected),
    )


def gadget_structurally_valid(inst, phi):
    """Each string falsifies some clause and is constant outside its groups."""
    if inst.strings is None:
        return True
    s = phi.group_size
    for row in inst.strings.data:
        found = False
        for clause in phi.clauses:
            if not all(row[v] == a for v, a in clause):
                continue
            touched = {phi.group_of(v) for v, _ in clause}
            const = all(
                len(set(int(x) for x in row[g * s : (g + 1) * s])) == 1
                for g in range(phi.num_groups)
                if g not in touched
            )
            if const:
                found = True
                break
        if not found:
            return False
    return True


# ---------------------------------------------------------------------------
# exhaustive farthest-assignment oracle (distance transform over [q]^N)


def farthest_assignment(strings, q, num_vars, cap=DEFAULT_SAT_CAP):
    """(max distance, lexicographically-first argmax, full distance array).

    Multi-source breadth-first sweep of the Hamming graph on [q]^N; exact
    and exhaustive (every assignment gets its distance to the string set),
    equivalent to the enumeration oracle and proven so in the tests.
    """
    total = q**num_vars
    if total > cap:
        raise BudgetError(f"q^N = {total} assignments exceed the cap of {cap}")
    pw = np.array([q**j for j in range(num_vars - 1, -1, -1)], dtype=np.int64)
    ids = np.asarray(strings, dtype=np.int64) @ pw
    dist = np.full(total, -1, dtype=np.int16)
    frontier = np.unique(ids)
    dist[frontier] = 0
    level = 0
    arange_q = np.arange(q, dtype=np.int64)
    while len(frontier):
        level += 1
        mask = np.zeros(total, dtype=bool)
        for start in range(0, len(frontier), 1 << 16):
            chunk = frontier[start : start + (1 << 16)]
            for j in range(num_vars):
                digit = (chunk // pw[j]) % q
                base = chunk - digit * pw[j]
                cand = base[:, None] + arange_q[None, :] * pw[j]
                mask[cand.ravel()] = True
            # chunk itself is marked via a == digit; filtered below
        nxt = np.nonzero(mask & (dist < 0))[0]
        dist[nxt] = level
        frontier = nxt
    best = int(np.argmax(dist))
    return int(dist[best]), best, dist


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class CertifyReport:
    """Per-instance verdict of the satisfiable <-> remote-threshold claim."""

    satisfiable: bool
    witness: tuple | None
    remotest_distance: float
    threshold: int
    biconditional_holds: bool
    balanced_witness: tuple | None = None
    balanced_witness_distance: int | None = None
    notes: tuple = ()

    def lines(self):
        out = []
        dist = self.remotest_distance
        out.append(f"satisfiable={'yes' if self.satisfiable else 'no'}")
        out.append(f"remotest_distance={dist} threshold={self.threshold}")
        comp = "PASS" if (not self.satisfiable or dist >= self.threshold + 1) else "FAIL"
        sound = "PASS" if (self.satisfiable or dist <= self.threshold) else "FAIL"
        out.append(f"completeness: {comp if self.satisfiable else 'N/A (unsatisfiable)'}")
        out.append(f"soundness: {sound if not self.satisfiable else 'N/A (satisfiable)'}")
        out.append(f"biconditional: {'PASS' if self.biconditional_holds else 'FAIL'}")
        for n in self.notes:
            out.append(f"note: {n}")
        return out


def _assignment_distance(assignment, inst):
    if inst.strings is None:
        return math.inf
    arr = np.asarray(assignment, dtype=np.int64)
    return int((inst.strings.data.astype(np.int64) != arr[None, :]).sum(axis=1).min())


def certify(phi, inst, cap=DEFAULT_SAT_CAP):
    """Run both brute oracles and report whether sat <-> distance > threshold.

    The formula should be the (grouped, regular) formula that produced the
    instance.  When a balanced satisfying assignment exists it is reported
    and its distance to the instance checked directly.
    """
    sat_ids = satisfying_ids(phi, cap=cap)
    satisfiable = len(sat_ids) > 0
    witness = None
    balanced_witness = None
    balanced_dist = None
    if satisfiable:
        symbols = _ids_to_symbols(sat_ids, phi.q, phi.num_vars)
        witness = tuple(int(x) for x in symbols[0])
        if phi.group_size is not None:
            mask = balanced_mask(phi, symbols)
            if mask.any():
                row = symbols[int(np.argmax(mask))]
                balanced_witness = tuple(int(x) for x in row)
                balanced_dist = _assignment_distance(balanced_witness, inst)
    if inst.strings is None:
        dist = math.inf
    else:
        dist, _, _ = farthest_assignment(inst.strings.data, phi.q, phi.num_vars, cap=cap)
    holds = satisfiable == (dist >= inst.threshold + 1)
    notes = []
    if balanced_witness is not None and balanced_dist is not None:
        notes.append(
            f"balanced witness at distance {balanced_dist} "
            f"(needs >= {inst.threshold + 1})"
        )
    return CertifyReport(
        satisfiable=satisfiable,
        witness=witness,
        remotest_distance=dist,
        threshold=inst.threshold,
        biconditional_holds=holds,
        balanced_witness=balanced_witness,
        balanced_witness_distance=balanced_dist,
        notes=tuple(notes),
    )


def _ids_to_symbols(ids, q, num_vars):
    pw = np.array([q**j for j in range(num_vars - 1, -1, -1)], dtype=np.int64)
    return ((ids[:, None] // pw[None, :]) % q).astype(np.uint8)


@dataclass(frozen=True)
class FamilyReport:
    """Verdict of the full pipeline over one balanced family."""

    satisfiable: bool
    family_size: int
    checked_members: int
    threshold: int
    balanced_member: int | None
    balanced_witness_distance: int | None
    member_distance: float | None
    max_unsat_distance: float | None
    sampled: bool
    passed: bool
    notes: tuple = ()

    def lines(self):
        out = [
            f"satisfiable={'yes' if self.satisfiable else 'no'} "
            f"family_size={self.family_size} checked={self.checked_members} "
            f"threshold={self.threshold}",
        ]
        if self.satisfiable:
            out.append(
                f"completeness: {'PASS' if self.passed else 'FAIL'} "
                f"(balanced member {self.balanced_member}, witness distance "
                f"{self.balanced_witness_distance}, member remotest {self.member_distance})"
            )
            out.append("soundness: N/A (satisfiable)")
        else:
            out.append("completeness: N/A (unsatisfiable)")
            out.append(
                f"soundness: {'PASS' if self.passed else 'FAIL'} "
                f"(max member distance {self.max_unsat_distance})"
            )
        out.append(f"family biconditional: {'PASS' if self.passed else 'FAIL'}")
        for n in self.notes:
            out.append(f"note: {n}")
        return out


def certify_family(
    phi,
    s=None,
    cap=DEFAULT_SAT_CAP,
    family_cap=DEFAULT_FAMILY_CAP,
    member_budget=None,
    gadget_budget=DEFAULT_GADGET_CAP,
):
    """regularize -> balance -> to_remotest -> certify across the family.

    Satisfiable source: find the first member with a balanced satisfying
    assignment (one must exist) and check its gadget clears the threshold.
    Unsatisfiable source: every member's gadget must stay at or below the
    threshold (all members checked unless member_budget trims the sweep).
    """
    if phi.group_size is not None:
        try:
            witness = derive_witness(phi)
            regular = phi
        except ValueError:
            regular, witness = regularize(phi, phi.group_size if s is None else s)
    else:
        if s is None:
            raise ValueError("ungrouped formula needs an explicit group size s")
        regular, witness = regularize(phi, s)
    sat_ids = satisfying_ids(regular, cap=cap)
    satisfiable = len(sat_ids) > 0
    perms = balance_permutations(regular, cap=family_cap)
    t = len(perms)
    notes = []

    if satisfiable:
        symbols = _ids_to_symbols(sat_ids, regular.q, regular.num_vars)
        var_index = np.arange(regular.num_vars)[None, :]
        found_member = None
        found_assignment = None
        for mi in range(t):
            mapped = perms[mi][var_index, symbols]
            mask = balanced_mask(regular, mapped)
            if mask.any():
                found_member = mi
                found_assignment = tuple(int(x) for x in mapped[int(np.argmax(mask))])
                break
        if found_member is None:
            return FamilyReport(
                satisfiable=True,
                family_size=t,
                checked_members=t,
                threshold=-1,
                balanced_member=None,
                balanced_witness_distance=None,
                member_distance=None,
                max_unsat_distance=None,
                sampled=False,
                passed=False,
                notes=("no balanced member found; balancing guarantee violated",),
            )
        member = apply_value_maps(regular, perms[found_member])
        inst = to_remotest(member, witness=witness, budget=gadget_budget)
        wd = _assignment_distance(found_assignment, inst)
        if inst.strings is None:
            dist = math.inf
        else:
            dist, _, _ = farthest_assignment(inst.strings.data, regular.q, regular.num_vars, cap=cap)
        passed = wd >= inst.threshold + 1 and dist >= inst.threshold + 1
        return FamilyReport(
            satisfiable=True,
            family_size=t,
            checked_members=found_member + 1,
            threshold=inst.threshold,
            balanced_member=found_member,
            balanced_witness_distance=None if wd is math.inf else int(wd),
            member_distance=dist,
            max_unsat_distance=None,
            sampled=False,
            passed=passed,
            notes=tuple(notes),
        )

    # unsatisfiable: soundness must hold on every member
    indices = range(t)
    sampled = False
    if member_budget is not None and t > member_budget:
        step = max(1, t // member_budget)
        indices = range(0, t, step)
        sampled = True
        notes.append(f"sampled every {step}th member of {t}")
    worst = -math.inf
    threshold = None
    checked = 0
    for mi in indices:
        member = apply_value_maps(regular, perms[mi])
        inst = to_remotest(member, witness=witness, budget=gadget_budget)
        threshold = inst.threshold
        if inst.strings is None:
            dist = math.inf
        else:
            dist, _, _ = farthest_assignment(inst.strings.data, regular.q, regular.num_vars, cap=cap)
        worst = max(worst, dist)
        checked += 1
        if dist > inst.threshold:
            break  # soundness already violated
    passed = worst <= threshold
    return FamilyReport(
        satisfiable=False,
        family_size=t,
        checked_members=checked,
        threshold=threshold,
        balanced_member=None,
        balanced_witness_distance=None,
        member_distance=None,
        max_unsat_distance=worst,
        sampled=sampled,
        passed=passed,
        notes=tuple(notes),
    )
