"""Request/response schemas for the workbench service (schema-v1)."""

from __future__ import annotations

from pydantic import BaseModel, Field


class AlgebraParams(BaseModel):
    p: int = 3
    K: int = 3
    degree_cap: int = 72


class ExprRequest(AlgebraParams):
    expr: str


class ParseCheckResponse(BaseModel):
    canonical: str
    tensor_lengths: list[int]
    degrees: list[int]


class DifferentialRequest(ExprRequest):
    module: str = "sphere"


class DifferentialResponse(BaseModel):
    result: str


class ExcessRequest(ExprRequest):
    pass


class ExcessResponse(BaseModel):
    excess: int | None
    normalized: str


class SolveCoassocRequest(AlgebraParams):
    target: str
    basis: list[str] | None = None
    all_monomials: bool = False


class CongruenceModel(BaseModel):
    parameter: str
    residue: int
    modulus: int


class SolveCoassocResponse(BaseModel):
    status: str
    basis: list[str] = Field(default_factory=list)
    particular: list[str] = Field(default_factory=list)
    particular_element: str = ""
    homogeneous_basis: list[list[str]] = Field(default_factory=list)
    homogeneous_elements: list[str] = Field(default_factory=list)
    congruences: list[CongruenceModel] = Field(default_factory=list)


class TSolutionModel(BaseModel):
    particular: str
    kernel: dict[str, str]
    responses: dict[str, str]
    congruences: list[CongruenceModel]
    leading: str
    leading_excess: int


class DeriveTResponse(BaseModel):
    solutions: dict[str, TSolutionModel]
    congruences: list[CongruenceModel]


class GroupModel(BaseModel):
    factors: list[int]
    alternatives: list[int] | None = None
    pretty: str


class E7GroupsResponse(BaseModel):
    j: int
    v2j: GroupModel
    v2jm1: GroupModel
    ambiguous: bool
    delta: int
    note: str


class E7RangeResponse(BaseModel):
    results: list[E7GroupsResponse]


class WitnessResponse(BaseModel):
    j: int
    residue_class: str
    exponent: int
    group: GroupModel
    delta: int
    note: str


class SphereOrderResponse(BaseModel):
    n: int
    m: int
    exponent: int


class BundleExponentResponse(BaseModel):
    n: int
    k: int
    j: int
    exponent: int


class B37Response(BaseModel):
    j: int
    s7_exponent: int
    b37_exponent: int
    exceptional: bool
    map: str


class StructureResponse(BaseModel):
    p: int
    K: int
    degree_cap: int
    m: list[str]
    eta_v: dict[str, str]
    psi_h: dict[str, str]


class VerifyRequest(BaseModel):
    degree_cap: int | None = None
    negative_control: bool = False
    ids: list[str] | None = None


class VerifyEntryModel(BaseModel):
    id: str
    statement: str
    kind: str
    status: str
    computed: str = ""
    expected: str = ""


class VerifyResponse(BaseModel):
    entries: list[VerifyEntryModel]
    passed: bool
    report: str


class ComoduleResponse(BaseModel):
    name: str
    text: str
    coassociative: bool
