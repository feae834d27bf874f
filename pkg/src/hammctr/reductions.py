"""Fine-grained equivalences between closest and remotest string (binary).

closest -> remotest: append r codeword repetitions to each string and r*L
zeros to each complement.  For any pair, HD(a_i, b_j) = d - HD(x_i, x_j) +
r*(L/4); the a-a distances exceed d + r*L/4 (codeword separation) and the
b-b distances stay below r*L/4, so the remotest objective of the target is
exactly shift - closest objective of the source, with shift = d + r*L/4.

remotest -> closest: the mirrored "complement each string, pad with a code
tail" recipe breaks down: each candidate sits at distance d + r*L/4 from its
own complement partner, which pins every radius to that constant (take
A = {00, 11}: the min-max radius of the mirrored target is 22, not the
22 - 2 the transform demands).  The construction here aligns the tails
instead: u_i = a_i . s_i and v_i = comp(a_i) . t_i where the tail family has
HD(s_i, t_j) = r*L/4 exactly for i != j, HD(s_i, t_i) = r*L/4 - 2h, and tiny
within-family distances (h = ceil(d/2)).  Concretely s_i = D u B_i and
t_i = C0 u B_i for a shared core C0 (|C0| = r*L/4 - h), a shared D (the
first h core positions) and per-string disjoint petals B_i of size h.  Then
every radius equals d + r*L/4 - remoteness_i and the same affine transform
holds, at the price of a capacity bound n <= (3*r*L/4 + 4h) / (4h) from
fitting the petals into the tail.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .codes import build_code
from .core import StringSet
from .errors import BudgetError


@dataclass(frozen=True)
class ReductionMap:
    """Provenance of a produced instance plus the objective transform.

    source objective = shift - target objective, with
    shift = source_d + r * code_length / 4 for the discrete directions and
    shift = source_d for the continuous complement identity.
    roles[k] = (role, source_index) for target string k.
    """

    direction: str
    source_n: int
    source_d: int
    target_n: int
    target_d: int
    r: int
    code_length: int
    shift: int
    roles: tuple

    def source_index(self, target_index):
        role, idx = self.roles[target_index]
        return idx, role

    def to_jsonl(self):
        head = {
            "direction": self.direction,
            "source_n": self.source_n,
            "source_d": self.source_d,
            "target_n": self.target_n,
            "target_d": self.target_d,
            "r": self.r,
            "code_length": self.code_length,
            "shift": self.shift,
        }
        lines = [json.dumps(head, sort_keys=True)]
        for k, (role, idx) in enumerate(self.roles):
            lines.append(json.dumps({"target": k, "role": role, "source": idx}, sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = json.loads(lines[0])
        roles = [None] * head["target_n"]
        for ln in lines[1:]:
            rec = json.loads(ln)
            roles[rec["target"]] = (rec["role"], rec["source"])
        return cls(roles=tuple(roles), **head)


def apply_transform(rmap, target_objective):
    """Invert the affine objective relation; exact integers only."""
    if not 0 <= target_objective <= rmap.target_d:
        raise ValueError(
            f"target objective {target_objective} outside [0, {rmap.target_d}]"
        )
    return rmap.shift - target_objective


def _require_binary(inst):
    if inst.sigma != 2:
        raise ValueError(f"reduction defined for binary alphabets only, got sigma={inst.sigma}")


def complement_continuous(inst):
    """Identity instance with the transform closest radius = d - remotest distance.

    Over binary alphabets HD(x, y) = d - HD(comp(x), y), so the continuous
    closest radius of X equals d minus the continuous remotest distance of X.
    """
    _require_binary(inst)
    rmap = ReductionMap(
        direction="complement",
        source_n=inst.n,
        source_d=inst.d,
        target_n=inst.n,
        target_d=inst.d,
        r=0,
        code_length=0,
        shift=inst.d,
        roles=tuple(("x", i) for i in range(inst.n)),
    )
    return inst, rmap


def closest_to_remotest(inst):
    """Emit the 2n-string remotest instance {a_i, b_i} for a closest instance."""
    _require_binary(inst)
    n, d = inst.n, inst.d
    code = build_code(n)
    dpp = code.length
    r = 10 * math.ceil(d / dpp)
    tail = r * dpp
    target = np.zeros((2 * n, d + tail), dtype=np.uint8)
    reps = np.tile(code.words, (1, r))
    target[:n, :d] = inst.data
    target[:n, d:] = reps
    target[n:, :d] = 1 - inst.data
    rmap = ReductionMap(
        direction="c2r",
        source_n=n,
        source_d=d,
        target_n=2 * n,
        target_d=d + tail,
        r=r,
        code_length=dpp,
        shift=d + r * (dpp // 4),
        roles=tuple(("a", i) for i in range(n)) + tuple(("b", i) for i in range(n)),
    )
    return StringSet(n=2 * n, d=d + tail, sigma=2, data=target), rmap


def r2c_tail_family(n, d, r, dpp):
    """Aligned tail family (s_i, t_i) for the remotest -> closest direction.

    HD(s_i, t_j) = K for i != j and K - 2h for i = j, within-family
    distances 2h, where K = r*dpp/4 and h = ceil(d/2).
    """
    tail = r * dpp
    k_const = tail // 4
    h = (d + 1) // 2
    # k_const >= d + 2h makes the cross terms dominate every radius
    if k_const < d + 2 * h:
        raise BudgetError(f"tail constant {k_const} too small for petals of size {h} at d={d}")
    capacity = (tail - k_const + h) // h
    if n > capacity:
        raise BudgetError(
            f"aligned-tail reduction fits at most {capacity} strings at d={d} "
            f"(tail {tail}), got n={n}"
        )
    s_fam = np.zeros((n, tail), dtype=np.uint8)
    t_fam = np.zeros((n, tail), dtype=np.uint8)
    t_fam[:, :k_const - h] = 1  # shared core C0
    s_fam[:, :h] = 1  # shared D, the first h core positions
    for i in range(n):
        lo = k_const - h + i * h
        s_fam[i, lo : lo + h] = 1
        t_fam[i, lo : lo + h] = 1
    return s_fam, t_fam, k_const, h


def remotest_to_closest(inst):
    """Emit the 2n-string closest instance {u_i, v_i} for a remotest instance."""
    _require_binary(inst)
    n, d = inst.n, inst.d
    code = build_code(n)
    dpp = code.length
    r = 10 * math.ceil(d / dpp)
    tail = r * dpp
    s_fam, t_fam, _, _ = r2c_tail_family(n, d, r, dpp)
    target = np.zeros((2 * n, d + tail), dtype=np.uint8)
    target[:n, :d] = inst.data
    target[:n, d:] = s_fam
    target[n:, :d] = 1 - inst.data
    target[n:, d:] = t_fam
    rmap = ReductionMap(
        direction="r2c",
        source_n=n,
        source_d=d,
        target_n=2 * n,
        target_d=d + tail,
        r=r,
        code_length=dpp,
        shift=d + r * (dpp // 4),
        roles=tuple(("u", i) for i in range(n)) + tuple(("v", i) for i in range(n)),
    )
    return StringSet(n=2 * n, d=d + tail, sigma=2, data=target), rmap
