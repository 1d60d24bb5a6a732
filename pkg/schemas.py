"""
Pydantic models for every --json output of the command line.
Words are serialized as digit strings.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from services.language_analysis import Diamond
from utils import format_word


class DiamondSchema(BaseModel):
    prefix: str
    mid_a: str
    mid_b: str
    suffix: str
    u: str
    u_prime: str

    @classmethod
    def from_diamond(cls, diamond: Diamond) -> 'DiamondSchema':
        return cls(
            prefix=format_word(diamond.prefix),
            mid_a=format_word(diamond.mid_a),
            mid_b=format_word(diamond.mid_b),
            suffix=format_word(diamond.suffix),
            u=format_word(diamond.u),
            u_prime=format_word(diamond.u_prime),
        )


class AnalyzeResult(BaseModel):
    rule: str
    k: int
    radius: int
    surjective: bool
    preinjective: bool
    orphan: Optional[str] = None
    diamond: Optional[DiamondSchema] = None
    minimal_neighborhood: List[int]
    idempotent: bool
    image_words: Optional[List[str]] = None


class Eq1Row(BaseModel):
    n: int
    size: int
    maps_onto: bool
    identity: bool
    witness: Optional[str] = None


class Eq1Result(BaseModel):
    rule: str
    bound: int
    rows: List[Eq1Row]
    first_violation: Optional[int] = None


class MembershipResult(BaseModel):
    rule: str
    verdict: str = Field(..., description="In, Out or ConsistentUpTo")
    label: str
    certificate: Optional[str] = None
    witness: Optional[str] = None
    bound: int
    details: Dict[str, Any] = Field(default_factory=dict)
    explanation: List[str] = Field(default_factory=list)


class EraserResult(BaseModel):
    rule: str
    u: str
    u_prime: str
    radius: int
    diamond: Optional[DiamondSchema] = None
    cyclic_checked: int
    random_checked: int
    idempotent: bool
    preserves_image: bool
    local: bool
    witness: Optional[List[str]] = None
    passed: bool


class MarkerResult(BaseModel):
    k: int
    N: int
    priority_windows: int
    radius_bound: int
    input: str
    cyclic: bool
    marks: str
    spacing_ok: bool
    uncovered: List[int]


class FactorizationResult(BaseModel):
    target: str
    factors: List[str]
    verified: bool


class OracleResult(BaseModel):
    k: int
    m: int
    map_count: int
    idempotent_count: int
    closure_size: int
    condition_size: int
    sets_equal: bool
    factorization_failures: int


class CountRow(BaseModel):
    n: int
    blocks: int
    words: int


class CodingKitResult(BaseModel):
    v: str
    k: int
    w: str
    w0: str
    w1: str
    m: int
    k_sep: int
    verified_range: List[int]
    certification: str
    growth_avoid_v: float
    growth_avoid_w: float
    counts: List[CountRow]


class CodeResult(BaseModel):
    v: str
    k: int
    input: str
    output: str


class ClassifyRow(BaseModel):
    rule: str
    verdict: str


class ClassifyResult(BaseModel):
    bound: int
    rows: List[ClassifyRow]


class RuleFileResult(BaseModel):
    rule: str
    k: int
    radius: int
    text: str = Field(..., description="rule file text, readable by --rule")
