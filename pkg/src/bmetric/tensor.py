"""Dense tensors of exact polynomials over a fixed frame.

Components are stored row-major in a flat tuple; every slot is tagged
covariant (``CO``) or contravariant (``CONTRA``).  Index tuples are 0-based.
A (1,1)-tensor ``A`` stored with kinds ``(CONTRA, CO)`` holds ``A[k, i]``, the
``e_k`` component of ``A(e_i)``.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator, Sequence

from .errors import SlotKindError, StructureError
from .scalar import Number, Poly

CO = "co"
CONTRA = "contra"

Index = tuple[int, ...]


class Tensor:
    __slots__ = ("kinds", "dim", "params", "data")

    def __init__(self, kinds: Sequence[str], dim: int, params: Sequence[str], data: Sequence[Poly]):
        kinds = tuple(kinds)
        for k in kinds:
            if k not in (CO, CONTRA):
                raise StructureError(f"unknown slot kind {k!r}")
        if dim < 1:
            raise StructureError("dimension must be positive")
        data = tuple(data)
        if len(data) != dim ** len(kinds):
            raise StructureError(
                f"expected {dim ** len(kinds)} components, got {len(data)}"
            )
        self.kinds = kinds
        self.dim = dim
        self.params = tuple(params)
        self.data = data

    @classmethod
    def build(cls, kinds: Sequence[str], dim: int, params: Sequence[str],
              fn: Callable[[Index], Poly | Number]) -> "Tensor":
        params = tuple(params)
        data = []
        for idx in itertools.product(range(dim), repeat=len(kinds)):
            value = fn(idx)
            if not isinstance(value, Poly):
                value = Poly.const(params, value)
            data.append(value)
        return cls(kinds, dim, params, data)

    @classmethod
    def zeros(cls, kinds: Sequence[str], dim: int, params: Sequence[str]) -> "Tensor":
        zero = Poly.const(params, 0)
        return cls(kinds, dim, params, [zero] * dim ** len(kinds))

    @classmethod
    def scalar(cls, value: Poly, dim: int) -> "Tensor":
        return cls((), dim, value.params, [value])

    @property
    def rank(self) -> int:
        return len(self.kinds)

    def _flat(self, idx: Index) -> int:
        pos = 0
        for i in idx:
            if not 0 <= i < self.dim:
                raise IndexError(f"index {idx} out of range for dim {self.dim}")
            pos = pos * self.dim + i
        return pos

    def __getitem__(self, idx) -> Poly:
        if isinstance(idx, int):
            idx = (idx,)
        if len(idx) != self.rank:
            raise IndexError(f"rank {self.rank} tensor indexed with {idx}")
        return self.data[self._flat(idx)]

    def indices(self) -> Iterator[Index]:
        return itertools.product(range(self.dim), repeat=self.rank)

    def items(self) -> Iterator[tuple[Index, Poly]]:
        return zip(self.indices(), self.data)

    def value(self) -> Poly:
        """The single component of a rank-0 tensor."""
        if self.rank:
            raise StructureError(f"rank {self.rank} tensor is not a scalar")
        return self.data[0]

    def map(self, fn: Callable[[Poly], Poly]) -> "Tensor":
        return Tensor(self.kinds, self.dim, self.params, [fn(x) for x in self.data])

    def _check_same(self, other: "Tensor") -> None:
        if (self.kinds, self.dim) != (other.kinds, other.dim):
            raise StructureError(
                f"shape mismatch: {self.kinds}/{self.dim} vs {other.kinds}/{other.dim}"
            )
        if self.params != other.params:
            raise StructureError(f"parameter sets differ: {self.params} vs {other.params}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor(self.kinds, self.dim, self.params, [a + b for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor(self.kinds, self.dim, self.params, [a - b for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "Tensor":
        return self.map(lambda x: -x)

    def __mul__(self, c) -> "Tensor":
        if isinstance(c, Tensor):
            return NotImplemented
        return self.map(lambda x: x * c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.data)

    def nonzero(self) -> Iterator[tuple[Index, Poly]]:
        return ((i, x) for i, x in self.items() if not x.is_zero())

    def bind(self, bindings) -> "Tensor":
        return self.map(lambda x: x.bind(bindings))

    def replace(self, idx: Index, value: Poly | Number) -> "Tensor":
        """Copy with one component overwritten (used for mutation tests)."""
        if not isinstance(value, Poly):
            value = Poly.const(self.params, value)
        data = list(self.data)
        data[self._flat(tuple(idx))] = value
        return Tensor(self.kinds, self.dim, self.params, data)

    # -- index gymnastics ---------------------------------------------

    def transpose(self, *order: int) -> "Tensor":
        """Numpy-style axis permutation: result slot ``k`` is our slot ``order[k]``."""
        if sorted(order) != list(range(self.rank)):
            raise StructureError(f"bad permutation {order} for rank {self.rank}")
        kinds = [self.kinds[o] for o in order]

        def fn(idx):
            src = [0] * self.rank
            for k, o in enumerate(order):
                src[o] = idx[k]
            return self[tuple(src)]

        return Tensor.build(kinds, self.dim, self.params, fn)

    def outer(self, other: "Tensor") -> "Tensor":
        if self.dim != other.dim or self.params != other.params:
            raise StructureError("outer product of incompatible tensors")
        data = [a * b for a in self.data for b in other.data]
        return Tensor(self.kinds + other.kinds, self.dim, self.params, data)

    def apply(self, slot: int, op: "Tensor") -> "Tensor":
        """Feed ``op(x)`` into a covariant slot: result(.., i, ..) = sum_m op[m, i] t(.., m, ..)."""
        if self.kinds[slot] != CO:
            raise SlotKindError(f"slot {slot} is not covariant")
        if op.kinds != (CONTRA, CO) or op.dim != self.dim:
            raise StructureError("operator must be a (1,1)-tensor of matching dimension")

        def fn(idx):
            total = Poly.const(self.params, 0)
            for m in range(self.dim):
                a = op[m, idx[slot]]
                if a:
                    src = idx[:slot] + (m,) + idx[slot + 1:]
                    total = total + a * self[src]
            return total

        return Tensor.build(self.kinds, self.dim, self.params, fn)

    def insert(self, slot: int, vector: "Tensor") -> "Tensor":
        """Evaluate a covariant slot on a contravariant vector, dropping that slot."""
        if self.kinds[slot] != CO:
            raise SlotKindError(f"slot {slot} is not covariant")
        if vector.kinds != (CONTRA,):
            raise SlotKindError("inserted argument must be a contravariant vector")
        kinds = self.kinds[:slot] + self.kinds[slot + 1:]

        def fn(idx):
            total = Poly.const(self.params, 0)
            for m in range(self.dim):
                v = vector[m]
                if v:
                    total = total + v * self[idx[:slot] + (m,) + idx[slot:]]
            return total

        return Tensor.build(kinds, self.dim, self.params, fn)

    def contract(self, slot_a: int, slot_b: int, metric_inverse: "Tensor | None" = None) -> "Tensor":
        return contract(self, slot_a, slot_b, metric_inverse)

    def lower(self, slot: int, metric: "Tensor") -> "Tensor":
        if self.kinds[slot] != CONTRA:
            raise SlotKindError(f"slot {slot} is not contravariant")
        return self._move(slot, metric, CO)

    def raise_(self, slot: int, metric_inverse: "Tensor") -> "Tensor":
        if self.kinds[slot] != CO:
            raise SlotKindError(f"slot {slot} is not covariant")
        return self._move(slot, metric_inverse, CONTRA)

    def _move(self, slot: int, m: "Tensor", kind: str) -> "Tensor":
        kinds = self.kinds[:slot] + (kind,) + self.kinds[slot + 1:]

        def fn(idx):
            total = Poly.const(self.params, 0)
            for a in range(self.dim):
                c = m[idx[slot], a]
                if c:
                    total = total + c * self[idx[:slot] + (a,) + idx[slot + 1:]]
            return total

        return Tensor.build(kinds, self.dim, self.params, fn)

    def __repr__(self) -> str:
        nz = sum(1 for x in self.data if x)
        return f"Tensor(kinds={self.kinds}, dim={self.dim}, nonzero={nz})"


def contract(t: Tensor, slot_a: int, slot_b: int, metric_inverse: Tensor | None = None) -> Tensor:
    """Trace over two slots.

    Two covariant slots are traced with ``metric_inverse`` (g^{ij}); a mixed
    pair uses the natural trace and ignores the metric.
    """
    if slot_a == slot_b:
        raise StructureError("cannot contract a slot with itself")
    ka, kb = t.kinds[slot_a], t.kinds[slot_b]
    if ka == CO and kb == CO:
        if metric_inverse is None or metric_inverse.kinds != (CONTRA, CONTRA):
            raise SlotKindError("covariant pair needs an inverse metric (contra, contra)")
        weight = lambda i, j: metric_inverse[i, j]
    elif ka != kb:
        weight = None
    else:
        raise SlotKindError("cannot trace two contravariant slots")

    lo, hi = sorted((slot_a, slot_b))
    kinds = tuple(k for s, k in enumerate(t.kinds) if s not in (slot_a, slot_b))

    def fn(idx):
        total = Poly.const(t.params, 0)
        head, mid, tail = idx[:lo], idx[lo:hi - 1], idx[hi - 1:]
        for i in range(t.dim):
            if weight is None:
                total = total + t[head + (i,) + mid + (i,) + tail]
                continue
            for j in range(t.dim):
                w = weight(i, j) if slot_a < slot_b else weight(j, i)
                if w:
                    total = total + w * t[head + (i,) + mid + (j,) + tail]
        return total

    return Tensor.build(kinds, t.dim, t.params, fn)


def apply_phi_slot(t: Tensor, slot: int, phi: Tensor) -> Tensor:
    return t.apply(slot, phi)


def cyclic_sum(t: Tensor) -> Tensor:
    """Cyclic sum over the first three slots: t(i,j,k,..) + t(j,k,i,..) + t(k,i,j,..)."""
    if t.rank < 3:
        raise StructureError("cyclic sum needs rank >= 3")

    def fn(idx):
        i, j, k, rest = idx[0], idx[1], idx[2], idx[3:]
        return t[(i, j, k) + rest] + t[(j, k, i) + rest] + t[(k, i, j) + rest]

    return Tensor.build(t.kinds, t.dim, t.params, fn)


def tensor_equal(a: Tensor, b: Tensor) -> bool:
    a._check_same(b)
    return a.data == b.data


def first_difference(a: Tensor, b: Tensor) -> Index | None:
    """Index of the first differing component, or None when equal."""
    a._check_same(b)
    for idx, x, y in zip(a.indices(), a.data, b.data):
        if x != y:
            return idx
    return None
