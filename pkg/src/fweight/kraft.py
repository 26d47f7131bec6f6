"""Online prefix-free code assignment (Kraft–Chaitin)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Iterable

from .core import BitString, FWeightError, canonical_key


@dataclass(frozen=True)
class CodeRequest:
    label: Hashable
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise FWeightError("requested code length must be a natural number")


class KraftError(FWeightError):
    def __init__(self, index: int, running_sum: Fraction):
        self.index = index
        self.running_sum = running_sum
        super().__init__(
            f"request {index} cannot be served: Kraft sum would reach {running_sum}")


def _as_request(r: Any) -> CodeRequest:
    if isinstance(r, CodeRequest):
        return r
    label, length = r
    return CodeRequest(label, int(length))


def kraft_chaitin_assign(requests: Iterable[CodeRequest | tuple[Hashable, int]]
                         ) -> list[tuple[Hashable, BitString]]:
    """Serve length requests in order with pairwise prefix-free codewords.

    The free strings form an antichain, initially ``{e}``.  A request for
    length ``ℓ`` takes the longest free string of length ``<= ℓ``, pads it with
    zeros to length ``ℓ``, and frees the ``1``-siblings met along the padding.
    Free lengths stay distinct, which is why every request list with Kraft
    sum at most 1 is served.
    """
    free: list[BitString] = [""]
    out: list[tuple[Hashable, BitString]] = []
    running = Fraction(0)
    for index, req in enumerate(map(_as_request, requests)):
        running += Fraction(1, 2**req.length)
        fits = [s for s in free if len(s) <= req.length]
        if not fits:
            raise KraftError(index, running)
        base = min(fits, key=lambda s: (-len(s), s))
        free.remove(base)
        for n in range(len(base), req.length):
            free.append(base + "0" * (n - len(base)) + "1")
        out.append((req.label, base + "0" * (req.length - len(base))))
    return out


def kraft_sum(lengths: Iterable[int]) -> Fraction:
    return sum((Fraction(1, 2**n) for n in lengths), Fraction(0))


def free_after(assigned: Iterable[BitString]) -> list[BitString]:
    """Strings a decoder could still start a fresh codeword with (for reports)."""
    used = set(assigned)
    free, frontier = [], [""]
    while frontier:
        s = frontier.pop()
        if s in used:
            continue
        if any(u.startswith(s) for u in used):
            frontier.extend((s + "0", s + "1"))
        else:
            free.append(s)
    return sorted(free, key=canonical_key)
