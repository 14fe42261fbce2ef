"""Theta-systems and their axiom checks."""

from __future__ import annotations

from dataclasses import dataclass

from ..derivedcat import DbObject, dual_object, hom_db
from ..report import Report


class ThetaInputError(ValueError):
    """Malformed system input."""


@dataclass
class ThetaSystem:
    """A family Theta(1..t) together with a linear order.

    ``order`` lists the indices from smallest to largest; ``None`` means the
    natural order.  Everything downstream works with :meth:`normalized`, in
    which position k holds the k-th smallest object.
    """

    theta: list
    order: list | None = None

    def __post_init__(self):
        t = len(self.theta)
        if self.order is None:
            self.order = list(range(1, t + 1))
        self.order = [int(x) for x in self.order]
        if sorted(self.order) != list(range(1, t + 1)):
            raise ThetaInputError(f"order {self.order} is not a permutation of 1..{t}")
        qs = {o.quiver for o in self.theta}
        if len(qs) > 1:
            raise ThetaInputError("objects live on different quivers")

    @property
    def t(self) -> int:
        return len(self.theta)

    @property
    def quiver(self):
        return self.theta[0].quiver

    def normalized(self) -> "ThetaSystem":
        return ThetaSystem([self.theta[i - 1] for i in self.order])

    def label(self, k: int) -> int:
        """Original index of normalized position ``k`` (1-based)."""
        return self.order[k - 1]

    def __getitem__(self, k: int) -> DbObject:
        """Theta(k) in the normalized indexing."""
        return self.theta[self.order[k - 1] - 1]

    def dual(self, seed: int = 0) -> "ThetaSystem":
        """Dual objects with the opposite order, over the opposite quiver."""
        n = self.normalized()
        return ThetaSystem([dual_object(o, seed) for o in reversed(n.theta)])


def check_theta_system(S: ThetaSystem) -> Report:
    """Axioms S1-S5; witnesses use the caller's original indices."""
    rep = Report()
    n = S.normalized()
    t = n.t
    rep.add("S1", t >= 1 and sorted(S.order) == list(range(1, t + 1)), dims=t)
    bad = [S.label(k) for k in range(1, t + 1) if not n.theta[k - 1].is_indecomposable()]
    rep.add("S2", not bad, witness=bad[0] if bad else None)
    w3 = w4 = w5 = None
    for j in range(1, t + 1):
        for i in range(1, t + 1):
            A, B = n.theta[j - 1], n.theta[i - 1]
            if w3 is None and j > i:
                d = hom_db(A, B, 0)
                if d:
                    w3 = ([S.label(j), S.label(i)], d)
            if w4 is None and j >= i:
                d = hom_db(A, B, 1)
                if d:
                    w4 = ([S.label(j), S.label(i)], d)
            if w5 is None:
                d = hom_db(A, B, -1)
                if d:
                    w5 = ([S.label(j), S.label(i)], d)
    for name, w in (("S3", w3), ("S4", w4), ("S5", w5)):
        rep.add(name, w is None, witness=w[0] if w else None, dims=w[1] if w else None)
    return rep
