"""
chibound Data Models - Pydantic v2 Schemas

Every record that crosses a module boundary or reaches the output lives here.
JSON is produced with model_dump_json(), so field order is the wire order.
"""

from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from chibound.core.config import settings


# ============================================================================
# Recognition
# ============================================================================

WitnessKind = Literal["3K1", "K1+C4"]


class Witness(BaseModel):
    """Vertex subset certifying an induced 3K1 or K1+C4."""

    model_config = ConfigDict(frozen=True)

    kind: WitnessKind = Field(..., description="Forbidden pattern found")
    vertices: list[int] = Field(
        ..., description="3K1: ascending triple; K1+C4: hub then the 4-cycle in cyclic order"
    )


class MembershipVerdict(BaseModel):
    """Class membership with a witness when excluded."""

    member: bool
    witness: Optional[Witness] = None

    @model_validator(mode="after")
    def _witness_iff_excluded(self) -> "MembershipVerdict":
        if self.member == (self.witness is not None):
            raise ValueError("witness must be present exactly when the graph is not a member")
        return self


# ============================================================================
# Invariants
# ============================================================================

class Matching(BaseModel):
    """Pairwise vertex-disjoint edges, each reported as (u, v) with u < v."""

    edges: list[tuple[int, int]] = Field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.edges)


class Coloring(BaseModel):
    """Vertex colouring; color[v] is the 0-based colour of vertex v."""

    color: list[int] = Field(default_factory=list)

    @property
    def num_colors(self) -> int:
        return len(set(self.color))


class InvariantReport(BaseModel):
    """Exact invariants of one graph with their certificates."""

    n: int = Field(..., ge=0)
    m: int = Field(..., ge=0)
    max_degree: int = Field(..., ge=0, description="Delta")
    alpha: int = Field(..., ge=0, description="Independence number")
    omega: int = Field(..., ge=0, description="Clique number")
    chi: int = Field(..., ge=0, description="Chromatic number")
    clique: list[int] = Field(..., description="Maximum clique witness")
    coloring: list[int] = Field(..., description="Optimal proper colouring, indexed by vertex")
    engines: list[Literal["branch_and_bound", "matching"]] = Field(
        ..., description="Chromatic engines that ran and agreed"
    )


# ============================================================================
# Structure
# ============================================================================

PartRole = Literal["M1", "M2", "M3", "M4"]
ClaimId = Literal["S1", "S2", "S3", "S4", "S5", "S6", "S7"]


class CliquePartition(BaseModel):
    """Partition of V(G) into at most four cliques."""

    parts: list[list[int]] = Field(..., description="Non-empty parts, each sorted")
    roles: list[PartRole] = Field(..., description="Role of each part (M1..M4)")
    anchor: Optional[tuple[int, int]] = Field(None, description="(v, w); None when G is complete")

    @property
    def j(self) -> int:
        return len(self.parts)


class NeighborhoodDecomposition(BaseModel):
    """Neighbourhood sets built around a non-adjacent pair (v, w)."""

    v: int
    w: int
    a: list[int] = Field(..., description="Common neighbours of v and w")
    b: list[int] = Field(..., description="Neighbours of v only")
    c: list[int] = Field(..., description="Neighbours of w only")
    a1: list[int] = Field(..., description="Greedy lexicographic maximal clique of <A>")
    a2: list[int] = Field(..., description="A - A1")
    b11: list[int] = Field(..., description="b in B with a non-neighbour in A2")
    b12: list[int] = Field(..., description="b in B with a non-neighbour in A1")
    b2: list[int] = Field(..., description="B - (B11 | B12)")
    outside: list[int] = Field(
        default_factory=list, description="Vertices in none of v, w, A, B, C (3K1 graphs only)"
    )
    fallback: bool = Field(False, description="v was chosen by the universal-vertex fallback")


class ClaimCheck(BaseModel):
    """One structural claim evaluated on one decomposition."""

    claim: ClaimId
    description: str
    holds: bool
    derived: bool = Field(False, description="Implied by the other claims")
    counterexample: Optional[list[int]] = None

    @model_validator(mode="after")
    def _counterexample_iff_failed(self) -> "ClaimCheck":
        if self.holds == (self.counterexample is not None):
            raise ValueError("counterexample must be present exactly when the claim fails")
        return self


class StructureReport(BaseModel):
    """Claims S1..S7 for one graph and decomposition."""

    v: int
    w: int
    member: bool
    v_is_max_degree: bool
    claims: dict[ClaimId, ClaimCheck]

    @property
    def holds(self) -> bool:
        return all(check.holds for check in self.claims.values())

    def failed(self) -> list[ClaimId]:
        return [claim for claim, check in self.claims.items() if not check.holds]


# ============================================================================
# Generators
# ============================================================================

GeneratorKind = Literal["cycle", "complete", "wheel", "join_power", "random"]


class GeneratorSpec(BaseModel):
    """Deterministic construction recipe for a test graph."""

    kind: GeneratorKind
    size: Optional[int] = Field(None, ge=0, description="Cycle length, clique size or rim length")
    factor: Optional["GeneratorSpec"] = Field(None, description="Factor graph for join_power")
    copies: Optional[int] = Field(None, ge=1, description="Copy count k for join_power")
    n: Optional[int] = Field(None, ge=0, description="Vertex count for random")
    p: Optional[float] = Field(None, ge=0.0, le=1.0, description="Edge probability for random")
    seed: Optional[int] = Field(None, ge=0, description="Seed for random")

    @model_validator(mode="after")
    def _check_kind_parameters(self) -> "GeneratorSpec":
        if self.kind in ("cycle", "wheel"):
            if self.size is None or self.size < 3:
                raise ValueError(f"{self.kind} needs size >= 3")
        elif self.kind == "complete":
            if self.size is None:
                raise ValueError("complete needs size")
        elif self.kind == "join_power":
            if self.factor is None or self.copies is None:
                raise ValueError("join_power needs factor and copies")
        elif self.kind == "random":
            if self.n is None or self.p is None or self.seed is None:
                raise ValueError("random needs n, p and seed")
        return self


GeneratorSpec.model_rebuild()


# ============================================================================
# Verification
# ============================================================================

CheckName = Literal["bound", "structure", "clique_cover", "engines", "reduction"]
ALL_CHECKS: tuple[CheckName, ...] = ("bound", "structure", "clique_cover", "engines", "reduction")

# Fixed key order of CampaignReport.claim_failures
FAILURE_KEYS: tuple[str, ...] = (
    "bound", "reed", "rational",
    "S1", "S2", "S3", "S4", "S5", "S6", "S7",
    "partition", "clique_cover", "engines", "reduction",
)


class BoundCheck(BaseModel):
    """The chromatic bound and the degree-based step for one member."""

    graph6: str
    n: int
    max_degree: int
    omega: int
    chi: int
    bound_floor: int = Field(..., description="floor(3 omega / 2)")
    reed_value: int = Field(..., description="ceil((Delta + omega + 1) / 2)")
    bound_ok: bool = Field(..., description="chi <= bound_floor")
    rational_ok: bool = Field(..., description="2 chi <= 3 omega")
    reed_ok: bool = Field(..., description="chi <= reed_value")
    tight: bool = Field(..., description="chi == bound_floor")
    reed_within_bound: bool = Field(..., description="reed_value <= bound_floor (informational)")


class ReductionCheck(BaseModel):
    """Universal-vertex step: G - u keeps membership and loses one from omega and chi."""

    graph6: str
    universal_vertex: int
    omega: int
    omega_without: int
    chi: int
    chi_without: int
    residual_member: bool
    holds: bool


class CampaignConfig(BaseModel):
    """Parameters of one bound-verification run."""

    mode: Literal["exhaustive", "random"]
    min_n: int = Field(1, ge=0)
    max_n: int = Field(..., ge=0)
    count: int = Field(1000, ge=1, description="Samples per n in random mode")
    p: float = Field(0.5, ge=0.0, le=1.0)
    seed: int = Field(0, ge=0)
    checks: list[CheckName] = Field(default_factory=lambda: list(ALL_CHECKS))
    output: Optional[Path] = Field(None, description="JSONL destination")
    workers: Optional[int] = Field(None, ge=0, description="Overrides settings.workers")
    shards_per_n: Optional[int] = Field(None, ge=1, description="Overrides settings.shards_per_n")
    enumeration_cap: Optional[int] = Field(None, ge=0, description="Overrides the setting")
    record_timings: bool = False

    @model_validator(mode="after")
    def _check_ranges(self) -> "CampaignConfig":
        if self.min_n > self.max_n:
            raise ValueError(f"min_n={self.min_n} exceeds max_n={self.max_n}")
        self.checks = [c for c in ALL_CHECKS if c in set(self.checks)]
        if self.mode == "exhaustive":
            cap = settings.enumeration_cap if self.enumeration_cap is None else self.enumeration_cap
            if self.max_n > cap:
                raise ValueError(f"exhaustive mode needs max_n <= {cap}, got {self.max_n}")
        return self


class ViolationRecord(BaseModel):
    """A failed check with a replayable graph6 certificate."""

    type: Literal["violation"] = "violation"
    check: str
    graph6: str
    n: int
    detail: dict[str, Any] = Field(default_factory=dict)


class ReplayRecord(BaseModel):
    """Outcome of re-running one recorded violation."""

    type: Literal["replay"] = "replay"
    line: int = Field(..., description="1-based line of the violation in the report")
    original: ViolationRecord
    fresh: Optional[ViolationRecord] = Field(None, description="None when it no longer reproduces")
    identical: bool = Field(..., description="fresh == original")


class ExtremalRecord(BaseModel):
    """First member (scan order) attaining the best chi / floor(3 omega / 2) at its n."""

    type: Literal["extremal"] = "extremal"
    n: int
    graph6: str
    omega: int
    chi: int
    bound_floor: int
    ratio: str = Field(..., description="Exact fraction chi/bound_floor")
    ratio_value: float


class ShardSummary(BaseModel):
    """Mergeable partial result of one shard (or of a whole campaign)."""

    graphs_scanned: int = 0
    three_k1_free: int = 0
    members_found: int = 0
    members_by_n: dict[int, int] = Field(default_factory=dict)
    claim_failures: dict[str, int] = Field(default_factory=lambda: dict.fromkeys(FAILURE_KEYS, 0))
    reed_within_bound_failures: int = 0
    reductions_checked: int = 0
    violations: list[ViolationRecord] = Field(default_factory=list)
    extremal: dict[int, ExtremalRecord] = Field(default_factory=dict)


class CampaignReport(BaseModel):
    """Final campaign summary."""

    type: Literal["summary"] = "summary"
    mode: Literal["exhaustive", "random"]
    min_n: int
    max_n: int
    checks: list[CheckName]
    graphs_scanned: int
    three_k1_free: int
    members_found: int
    members_by_n: dict[int, int]
    violation_count: int
    claim_failures: dict[str, int]
    reed_within_bound_failures: int
    reductions_checked: int
    max_ratio: Optional[str] = Field(None, description="Exact max chi/floor(3 omega/2)")
    max_ratio_value: Optional[float] = None
    extremal: list[ExtremalRecord] = Field(default_factory=list)
    violations: list[ViolationRecord] = Field(default_factory=list)
    elapsed_seconds: Optional[float] = Field(None, description="Set only with timings")

    @property
    def clean(self) -> bool:
        return self.violation_count == 0


class RemarkRow(BaseModel):
    """One join-power instance of the tightness examples."""

    type: Literal["remark_row"] = "remark_row"
    family: Literal["C5", "wheel5", "wheel6"]
    m: int = Field(..., description="Number of joined copies")
    n: int
    graph6: str
    member: bool
    witness: Optional[Witness] = None
    witness_valid: Optional[bool] = None
    alpha: int
    omega: int
    chi: int
    bound_floor: int
    tight: bool
    chi_over_bound: bool = Field(..., description="chi > floor(3 omega / 2)")


class RemarkReport(BaseModel):
    """All rows of the tightness-example experiment."""

    k_max: int
    rows: list[RemarkRow]

    @property
    def witnesses_valid(self) -> bool:
        return all(row.witness_valid for row in self.rows if row.witness is not None)


# ============================================================================
# Command line
# ============================================================================

Subcommand = Literal[
    "check", "invariants", "decompose", "verify-bound", "replay", "generate", "remark"
]


class Command(BaseModel):
    """Validated command-line invocation."""

    subcommand: Subcommand
    g6: Optional[str] = None
    file: Optional[str] = Field(None, description="Path, or '-' for stdin batch mode")
    format: Literal["json", "text"] = "json"
    out: Optional[Path] = None
    options: dict[str, Any] = Field(default_factory=dict, description="Subcommand-specific flags")

    @model_validator(mode="after")
    def _single_source(self) -> "Command":
        if self.g6 is not None and self.file is not None:
            raise ValueError("--g6 and --file are mutually exclusive")
        return self


class MembershipRecord(BaseModel):
    """Output of the check subcommand for one graph."""

    graph6: str
    n: int
    m: int
    member: bool
    witness: Optional[Witness] = None


class InvariantRecord(BaseModel):
    """Output of the invariants subcommand for one graph."""

    graph6: str
    report: InvariantReport


class DecompositionRecord(BaseModel):
    """Output of the decompose subcommand for one graph."""

    graph6: str
    member: bool
    witness: Optional[Witness] = None
    partition: Optional[CliquePartition] = None
    partition_issues: list[str] = Field(default_factory=list)
    clique_cover_bound: Optional[int] = None
    decomposition: Optional[NeighborhoodDecomposition] = None
    structure: Optional[StructureReport] = None


class GeneratedGraph(BaseModel):
    """Output of the generate subcommand."""

    graph6: str
    n: int
    m: int
    spec: GeneratorSpec
