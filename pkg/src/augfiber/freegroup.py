"""Reduced words in a free group and Nielsen reduction of generating tuples."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Sequence

from .errors import BudgetExceeded, RankMismatch

Letter = tuple[Hashable, int]
DEFAULT_BUDGET = 200_000


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError(f"exponent must be +-1, got {e}")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def gen(cls, g: Hashable, e: int = 1) -> "Word":
        return cls(((g, e),))

    @classmethod
    def of(cls, *parts: "Word | Letter") -> "Word":
        letters: list[Letter] = []
        for p in parts:
            letters.extend(p.letters if isinstance(p, Word) else (p,))
        return cls(tuple(letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else ~self
        out = Word()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self) -> int:
        return len(self.letters)

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def exponent_sum(self, g: Hashable) -> int:
        return sum(e for h, e in self.letters if h == g)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"{g}" if e == 1 else f"{g}^-1" for g, e in self.letters)

    def to_json(self) -> list:
        return [[g, e] for g, e in self.letters]

    @classmethod
    def from_json(cls, data) -> "Word":
        return cls(tuple((g, int(e)) for g, e in data))


# ------------------------------------------------------------ Nielsen moves

@dataclass(frozen=True)
class Move:
    """Elementary Nielsen move on slot ``i`` of a tuple.

    ``swap``: exchange slots i and j; ``invert``: v_i <- v_i^-1;
    ``mul_left``: v_i <- v_j^sign v_i; ``mul_right``: v_i <- v_i v_j^sign.
    """

    op: str
    i: int
    j: int = -1
    sign: int = 1

    def apply(self, t: Sequence[Word]) -> tuple[Word, ...]:
        t = list(t)
        if self.op == "swap":
            t[self.i], t[self.j] = t[self.j], t[self.i]
        elif self.op == "invert":
            t[self.i] = ~t[self.i]
        elif self.op == "mul_left":
            t[self.i] = t[self.j] ** self.sign * t[self.i]
        elif self.op == "mul_right":
            t[self.i] = t[self.i] * t[self.j] ** self.sign
        else:
            raise ValueError(self.op)
        return tuple(t)

    def inverse(self) -> "Move":
        if self.op in ("swap", "invert"):
            return self
        return Move(self.op, self.i, self.j, -self.sign)

    def to_json(self) -> dict:
        return {"op": self.op, "i": self.i, "j": self.j, "sign": self.sign}

    @classmethod
    def from_json(cls, data: dict) -> "Move":
        return cls(data["op"], int(data["i"]), int(data.get("j", -1)), int(data.get("sign", 1)))


@dataclass(frozen=True)
class NielsenTrace:
    initial: tuple[Word, ...]
    moves: tuple[Move, ...] = ()
    snapshots: tuple[tuple[Word, ...], ...] = ()

    @property
    def final(self) -> tuple[Word, ...]:
        return self.snapshots[-1] if self.snapshots else self.initial

    def replay(self, start: Optional[Sequence[Word]] = None) -> tuple[Word, ...]:
        t = tuple(self.initial if start is None else start)
        for m in self.moves:
            t = m.apply(t)
        return t

    def inverse(self) -> "NielsenTrace":
        """The trace running from the final tuple back to the initial one."""
        moves = tuple(m.inverse() for m in reversed(self.moves))
        return make_trace(self.final, moves)

    def to_json(self) -> dict:
        return {
            "initial": [w.to_json() for w in self.initial],
            "moves": [dict(m.to_json(), words=[w.to_json() for w in snap])
                      for m, snap in zip(self.moves, self.snapshots)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "NielsenTrace":
        initial = tuple(Word.from_json(w) for w in data["initial"])
        moves = tuple(Move.from_json(m) for m in data["moves"])
        snaps = tuple(tuple(Word.from_json(w) for w in m["words"]) for m in data["moves"])
        return cls(initial, moves, snaps)


def make_trace(initial: Sequence[Word], moves: Iterable[Move]) -> NielsenTrace:
    t = tuple(initial)
    snaps = []
    ms = tuple(moves)
    for m in ms:
        t = m.apply(t)
        snaps.append(t)
    return NielsenTrace(tuple(initial), ms, tuple(snaps))


def step_budget() -> int:
    raw = os.environ.get("AUGFIBER_STEP_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _mul_moves(n: int):
    for op in ("mul_left", "mul_right"):
        for i in range(n):
            for j in range(n):
                if i != j:
                    for s in (1, -1):
                        yield Move(op, i, j, s)


def _cancel(left: tuple[Letter, ...], right: tuple[Letter, ...]) -> int:
    """Number of letters cancelled at the junction of ``left * right``."""
    k = 0
    n = min(len(left), len(right))
    while k < n and left[-1 - k][0] == right[k][0] and left[-1 - k][1] == -right[k][1]:
        k += 1
    return k


def _length_change(t: Sequence[Word], inv: Sequence[Word], m: Move) -> int:
    a = t[m.i].letters
    b = (t[m.j] if m.sign == 1 else inv[m.j]).letters
    k = _cancel(b, a) if m.op == "mul_left" else _cancel(a, b)
    return len(b) - 2 * k


def _best_reduction(t: tuple[Word, ...]) -> Optional[Move]:
    """The move with the largest length drop; ties broken lexicographically."""
    inv = [~w for w in t]
    best = None
    best_key = None
    for m in _mul_moves(len(t)):
        change = _length_change(t, inv, m)
        if change < 0:
            key = (change, m.op, m.i, m.j, -m.sign)
            if best_key is None or key < best_key:
                best, best_key = m, key
    return best


def _plateau_search(t: tuple[Word, ...], budget: list[int]) -> Optional[list[Move]]:
    """Breadth-first search over equal-length tuples for one that can be shortened."""
    start = t
    prev: dict[tuple, Optional[tuple]] = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded("Nielsen search exceeded its step budget")
        inv = [~w for w in cur]
        for m in _mul_moves(len(cur)):
            delta = _length_change(cur, inv, m)
            if delta > 0:
                continue
            if delta < 0:
                path = [m]
                node = cur
                while prev[node] is not None:
                    parent, pm = prev[node]
                    path.append(pm)
                    node = parent
                return list(reversed(path))
            nxt = m.apply(cur)
            if nxt not in prev:
                prev[nxt] = (cur, m)
                queue.append(nxt)
    return None


def _normalize(t: tuple[Word, ...], basis: Sequence[Hashable]) -> list[Move]:
    """Swaps and inversions taking a permuted, signed basis to ``basis``."""
    moves = []
    t = list(t)
    for k, g in enumerate(basis):
        at = next(p for p in range(k, len(t)) if t[p].letters[0][0] == g)
        if at != k:
            m = Move("swap", k, at)
            moves.append(m)
            t = list(m.apply(t))
        if t[k].letters[0][1] == -1:
            m = Move("invert", k)
            moves.append(m)
            t = list(m.apply(t))
    return moves


def is_basis_shape(t: Sequence[Word], basis: Sequence[Hashable]) -> bool:
    if any(len(w) != 1 for w in t):
        return False
    return sorted(map(repr, (w.letters[0][0] for w in t))) == sorted(map(repr, basis))


def nielsen_generates(images: Sequence[Word], rank: int,
                      basis: Optional[Sequence[Hashable]] = None,
                      budget: Optional[int] = None) -> tuple[bool, NielsenTrace]:
    """Decide whether ``images`` is a free basis of the free group on ``basis``.

    Runs Nielsen reduction: strictly length-reducing moves, greedy by largest
    drop, and a breadth-first search over equal-length tuples when stuck.
    A square tuple generates iff it reduces to the basis up to order and
    inversion.  On success the trace ends exactly at ``basis`` in order; on
    failure it ends at the reduced tuple.
    """
    images = tuple(images)
    if len(images) != rank:
        raise RankMismatch(f"{len(images)} images for rank {rank}")
    if basis is None:
        basis = sorted({g for w in images for g in w.generators()}, key=repr)
    basis = list(basis)
    if len(basis) != rank:
        raise RankMismatch(f"basis has {len(basis)} generators, rank is {rank}")
    stray = {g for w in images for g in w.generators()} - set(basis)
    if stray:
        raise ValueError(f"letters outside the basis: {sorted(map(repr, stray))}")
    left = [budget if budget is not None else step_budget()]
    t = images
    moves: list[Move] = []
    while True:
        if any(len(w) == 0 for w in t):
            return False, make_trace(images, moves)
        if is_basis_shape(t, basis):
            moves += _normalize(t, basis)
            return True, make_trace(images, moves)
        m = _best_reduction(t)
        if m is not None:
            left[0] -= 1
            if left[0] < 0:
                raise BudgetExceeded("Nielsen reduction exceeded its step budget")
            moves.append(m)
            t = m.apply(t)
            continue
        path = _plateau_search(t, left)
        if path is None:
            return False, make_trace(images, moves)
        for m in path:
            moves.append(m)
            t = m.apply(t)
