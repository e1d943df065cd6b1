"""Registry of generated box families.

A ``family`` node describes a non-wellfounded box whose calls are produced by
a named generator instead of a finite list.  This covers boxes without finite
support, which no finite call list plus selector can express.  Each entry
knows how to build the i-th call as a spec, whether the stream of calls has
finite support / is periodic, and a depth bound for the calls.
"""

from __future__ import annotations


class Family:
    name = None
    finite_support = False
    periodic = False

    def check(self, node):
        raise NotImplementedError

    def call(self, node, i):
        """The i-th call of the box described by ``node`` (a spec)."""
        raise NotImplementedError


class PrependTower(Family):
    """Calls D_i = <c1, ..., c1, c0, c0, ...> with i copies of c1 first.

    ``node.kids`` are the two base derivations (c1, c0); all D_i are distinct
    boxes, so the outer box has infinite support.
    """

    name = "prepend-tower"
    finite_support = False
    periodic = False

    def check(self, node):
        from pllk import proofcore

        p = proofcore.promotion_shape(node.concl)
        inner = proofcore.strip_promotion(node.concl, p)
        q = proofcore.promotion_shape(inner)
        base = proofcore.strip_promotion(inner, q)
        if len(node.kids) != 2:
            raise proofcore.ProofError("prepend-tower takes two base calls")
        for kid in node.kids:
            if kid.concl != base:
                raise proofcore.ProofError(
                    "prepend-tower base calls must prove the doubly stripped conclusion"
                )

    def call(self, node, i):
        from pllk import proofcore
        from pllk.selector import EventuallyPeriodic

        inner = proofcore.strip_promotion(node.concl)
        sel = EventuallyPeriodic((0,) * i, (1,))
        return proofcore.nwb(inner, node.kids, sel)


_REGISTRY = {f.name: f for f in (PrependTower(),)}


def get(name):
    if name not in _REGISTRY:
        raise KeyError(f"unknown family {name!r}")
    return _REGISTRY[name]
