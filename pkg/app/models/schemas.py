from typing import Any, Dict, FrozenSet, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.utils.vectors import Vector, is_prime, mask_members

SUITES = (
    "gen-conj",
    "congruence",
    "sset-max",
    "m-grid",
    "props1-4",
    "cardinality",
    "packets",
    "decomposition",
    "census",
)

GENERICITY_FILTERS = ("all", "weak", "strong", "boundary")


# ============ Ground Schemas ============
class FieldShape(BaseModel):
    """Residue characteristic p, residue degree f and ramification degree e"""

    model_config = ConfigDict(frozen=True)

    p: int = Field(ge=2)
    f: int = Field(ge=1)
    e: int = Field(ge=1)

    @field_validator("p")
    @classmethod
    def p_must_be_prime(cls, v):
        if not is_prime(v):
            raise ValueError(f"p={v} is not prime")
        return v

    @property
    def q(self) -> int:
        return self.p ** self.f - 1

    @property
    def unit(self) -> int:
        """q / (p - 1), the Omega-sum of the all-one vector"""
        return self.q // (self.p - 1)

    def to_dict(self) -> Dict:
        return {"p": self.p, "f": self.f, "e": self.e, "q": self.q}


class InertiaCharacter(BaseModel):
    """Normalized inertia exponents: n_i in [1, p] with some n_i < p"""

    model_config = ConfigDict(frozen=True)

    shape: FieldShape
    n: Vector

    @model_validator(mode="after")
    def check_normalized(self):
        p, f = self.shape.p, self.shape.f
        if len(self.n) != f:
            raise ValueError(f"n has length {len(self.n)}, expected f={f}")
        if any(v < 1 or v > p for v in self.n):
            raise ValueError(f"n={list(self.n)} has entries outside [1, {p}]")
        if all(v == p for v in self.n):
            raise ValueError(f"n={list(self.n)} needs some entry below p={p}")
        return self


class CharacterPair(BaseModel):
    """
    Inertia data of chi = chi1 * chi2^-1 and chi2 plus the caller-supplied
    flags that depend on the unramified parts.
    """

    model_config = ConfigDict(frozen=True)

    shape: FieldShape
    n: Vector
    n2_class: int = 0
    chi_trivial: bool = False
    chi_cyclotomic: bool = False
    chi_inv_cyclotomic: bool = False
    chi2_unramified: bool = False

    @model_validator(mode="after")
    def check_inertia_data(self):
        InertiaCharacter(shape=self.shape, n=self.n)
        if not 0 <= self.n2_class < max(self.shape.q, 1):
            raise ValueError(f"n2_class={self.n2_class} is not reduced mod q={self.shape.q}")
        return self

    @property
    def p(self) -> int:
        return self.shape.p

    @property
    def f(self) -> int:
        return self.shape.f

    @property
    def e(self) -> int:
        return self.shape.e

    @property
    def q(self) -> int:
        return self.shape.q

    def flags(self) -> Tuple[str, ...]:
        names = ("chi_trivial", "chi_cyclotomic", "chi_inv_cyclotomic", "chi2_unramified")
        return tuple(name for name in names if getattr(self, name))

    def to_dict(self) -> Dict:
        return {
            **self.shape.to_dict(),
            "n": list(self.n),
            "n2_class": self.n2_class,
            "flags": list(self.flags()),
        }


# ============ Serre Weight Schemas ============
class SerreWeight(BaseModel):
    """A Serre weight sigma_{a,b} in canonical form"""

    model_config = ConfigDict(frozen=True)

    shape: FieldShape
    a: Vector
    b: Vector

    @model_validator(mode="after")
    def check_canonical(self):
        p, f = self.shape.p, self.shape.f
        if len(self.a) != f or len(self.b) != f:
            raise ValueError(f"a and b must have length f={f}")
        if any(not 0 <= ai - bi <= p - 1 for ai, bi in zip(self.a, self.b)):
            raise ValueError(f"a-b must lie in [0, {p - 1}]")
        if any(not 0 <= bi <= p - 1 for bi in self.b) or all(bi == p - 1 for bi in self.b):
            raise ValueError(f"b={list(self.b)} is not canonical")
        return self

    @property
    def a_minus_b(self) -> Vector:
        return tuple(ai - bi for ai, bi in zip(self.a, self.b))

    @property
    def r(self) -> Vector:
        return tuple(ai - bi + 1 for ai, bi in zip(self.a, self.b))

    @property
    def label(self) -> str:
        return ",".join(map(str, self.a)) + "/" + ",".join(map(str, self.b))

    def sort_key(self) -> Tuple:
        return (self.a_minus_b, self.b)


# ============ Witness Schemas ============
class JXPair(BaseModel):
    """Witness (J, x): J as a bitmask over embeddings, x in [0, e-1]^f"""

    model_config = ConfigDict(frozen=True)

    J: int = Field(ge=0)
    x: Vector

    def contains(self, i: int) -> bool:
        return bool((self.J >> i) & 1)

    def members(self) -> Vector:
        return mask_members(self.J, len(self.x))

    def to_dict(self) -> Dict:
        return {"J": list(self.members()), "x": list(self.x)}

    def sort_key(self) -> Tuple:
        return (self.J, self.x)


class STPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: Vector
    t: Vector


# ============ Basis Index Schemas ============
class BasisIndex(BaseModel):
    """Coordinate of the H^1 basis: CA(m, k), or the UN / TR markers"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["CA", "UN", "TR"]
    m: Optional[int] = None
    k: Optional[int] = None

    @model_validator(mode="after")
    def check_fields(self):
        if self.kind == "CA":
            if self.m is None or self.k is None or self.m <= 0 or self.k < 0:
                raise ValueError("CA index needs m > 0 and k >= 0")
        elif self.m is not None or self.k is not None:
            raise ValueError(f"{self.kind} marker carries no (m, k)")
        return self

    @classmethod
    def ca(cls, m: int, k: int) -> "BasisIndex":
        return cls(kind="CA", m=m, k=k)

    @property
    def is_marker(self) -> bool:
        return self.kind != "CA"

    def sort_key(self) -> Tuple:
        order = {"CA": 0, "UN": 1, "TR": 2}
        return (order[self.kind], self.m or 0, self.k or 0)

    def to_json(self):
        return {"m": self.m, "k": self.k} if self.kind == "CA" else self.kind

    def token(self) -> str:
        return f"{self.m}:{self.k}" if self.kind == "CA" else self.kind.lower()


UN = BasisIndex(kind="UN")
TR = BasisIndex(kind="TR")


class JahData(BaseModel):
    """Maximal witness and the derived per-embedding data of the index-set search"""

    model_config = ConfigDict(frozen=True)

    jx: JXPair
    s: Vector
    t: Vector
    r: Vector
    xi: Vector
    intervals: Tuple[Tuple[int, ...], ...]
    includes_tr: bool

    def to_dict(self) -> Dict:
        return {
            "jx": self.jx.to_dict(),
            "s": list(self.s),
            "t": list(self.t),
            "xi": list(self.xi),
            "intervals": [list(i) for i in self.intervals],
            "includes_tr": self.includes_tr,
        }


class DimensionVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    ell: Vector

    @field_validator("ell")
    @classmethod
    def entries_nonnegative(cls, v):
        if any(x < 0 for x in v):
            raise ValueError("dimension vector entries must be >= 0")
        return v


# ============ Packet Schemas ============
class ExtensionClass(BaseModel):
    """An extension class, known only through its nonzero basis coordinates"""

    model_config = ConfigDict(frozen=True)

    support: FrozenSet[BasisIndex] = frozenset()

    def tokens(self) -> List[str]:
        return [a.token() for a in sorted(self.support, key=BasisIndex.sort_key)]


class PacketMap(BaseModel):
    packets: Dict[Vector, FrozenSet[SerreWeight]]
    unmatched: FrozenSet[SerreWeight] = frozenset()
    tr_sensitive: FrozenSet[SerreWeight] = frozenset()


class WeightSetResult(BaseModel):
    weights: FrozenSet[SerreWeight]
    tres_ramifiee: bool
    w_max: Optional[Vector] = None
    direct: FrozenSet[SerreWeight] = frozenset()
    agrees: bool = True


# ============ Verification Schemas ============
class SweepConfig(BaseModel):
    """Grid and suite selection for a verification sweep"""

    primes: List[int] = Field(default_factory=lambda: [2, 3, 5, 7])
    max_f: int = Field(default=2, gt=0)
    max_e: int = Field(default=2, gt=0)
    max_ef: int = Field(default=4, gt=0)
    genericity_filter: Literal["all", "weak", "strong", "boundary"] = "all"
    suites: List[str] = Field(default_factory=lambda: list(SUITES))
    class_samples: int = Field(default=200, ge=0)
    jobs: int = Field(default=1, ge=1)
    n2_class: int = Field(default=0, ge=0)
    seed: int = 0
    deterministic: bool = False

    @field_validator("primes")
    @classmethod
    def primes_must_be_prime(cls, v):
        if not v:
            raise ValueError("primes must be nonempty")
        bad = [p for p in v if not is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {bad}")
        return sorted(set(v))

    @field_validator("suites")
    @classmethod
    def suites_known(cls, v):
        if not v:
            raise ValueError("suites must be nonempty")
        unknown = [s for s in v if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suites: {unknown}")
        return [s for s in SUITES if s in v]


class Finding(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str
    input: Dict[str, Any]
    expected: str
    observed: str
    severity: Literal["violation", "boundary-note"]

    def sort_key(self) -> Tuple:
        return (self.suite, repr(sorted(self.input.items())), self.expected, self.observed)


class CellResult(BaseModel):
    """Outcome of one suite on one (p, f, e, n, flags) cell"""

    p: int
    f: int
    e: int
    n: Vector
    flags: Tuple[str, ...]
    suite: str
    status: Literal["ok", "findings", "skipped", "refused", "error"]
    violations: int = 0
    notes: int = 0
    detail: str = ""
    elapsed: Optional[float] = None

    def sort_key(self) -> Tuple:
        return (self.p, self.f, self.e, self.n, self.flags, self.suite)
