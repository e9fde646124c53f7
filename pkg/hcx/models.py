"""
Pydantic models for input payloads and reports
"""
from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Optional, List, Dict, Tuple, Union
from datetime import datetime, timezone
from enum import Enum
import os
import re

_SU2_SHORTHAND = re.compile(r"^\s*su2\s*(?:\^\s*\d+)?\s*$")


class StepKind(str, Enum):
    """Certificate step kinds"""
    SUBSTITUTE = "substitute"
    LINEAR_COMBINE = "linear-combine"
    JACOBI = "jacobi"
    SUM_OF_SQUARES_CONTRADICTION = "sum-of-squares-contradiction"
    ZERO_VS_NONZERO_CONTRADICTION = "zero-vs-nonzero-contradiction"

    @property
    def is_contradiction(self) -> bool:
        return self in (StepKind.SUM_OF_SQUARES_CONTRADICTION, StepKind.ZERO_VS_NONZERO_CONTRADICTION)


class PremiseRole(str, Enum):
    """What a certificate premise asserts"""
    EQ = "eq"          # polynomial = 0
    VEQ = "veq"        # formal vector = 0
    NZ = "nz"          # polynomial != 0
    VNZ = "vnz"        # formal vector != 0
    BASIS = "basis"    # listed labels are linearly independent
    RULE = "rule"      # label rewrite rule "LHS=>RHS"
    HYP = "hyp"        # polynomial assumed = 0 until a contradiction discharges it
    HYP_BASIS = "hyp-basis"  # labels assumed independent until a contradiction discharges it

    @property
    def is_hypothesis(self) -> bool:
        return self in (PremiseRole.HYP, PremiseRole.HYP_BASIS)


class LieAlgebraPayload(BaseModel):
    """Lie algebra given by 1-based structure constants, or the su(2)^m shorthand"""
    dim: Optional[int] = Field(default=None, ge=0, description="Dimension of the algebra")
    structure: List[Tuple[int, int, int, Union[str, int]]] = Field(
        default_factory=list,
        description="Nonzero structure constants [i, j, k, \"p/q\"] meaning c[i][j][k]"
    )
    factor_layout: Optional[List[Tuple[int, int]]] = Field(
        default=None, description="Optional (offset, size) blocks of a direct-sum decomposition"
    )
    su2_power: Optional[int] = Field(default=None, ge=1, description="Shorthand for su(2)^m")

    @model_validator(mode="after")
    def check_shape(self):
        if self.su2_power is None and self.dim is None:
            raise ValueError("either 'dim' or 'su2_power' is required")
        return self

    model_config = {
        "json_schema_extra": {
            "example": {
                "dim": 3,
                "structure": [[1, 2, 3, "1"], [2, 3, 1, "1"], [3, 1, 2, "1"]]
            }
        }
    }


class EndomorphismPayload(BaseModel):
    """Square matrix, column i is the image of basis vector e_i"""
    dim: int = Field(..., ge=1, description="Size of the matrix")
    matrix: List[List[Union[str, int]]] = Field(..., description="Rows of \"p/q\" entries")

    @field_validator("matrix")
    @classmethod
    def check_rows(cls, rows):
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        return rows

    @model_validator(mode="after")
    def check_dim(self):
        if len(self.matrix) != self.dim:
            raise ValueError(f"matrix has {len(self.matrix)} rows, dim is {self.dim}")
        return self


class NijenhuisFailure(BaseModel):
    """First basis pair with a nonzero Nijenhuis value"""
    pair: Tuple[int, int] = Field(..., description="1-based basis indices i < j")
    value: List[str] = Field(..., description="Coordinates of N(e_i, e_j)")
    factor: Optional[int] = Field(default=None, description="Factor of e_i when a layout exists")


class IntegrabilityReport(BaseModel):
    """Outcome of checking one almost complex structure"""
    squares_to_minus_id: bool
    nijenhuis_zero: bool
    pairs_checked: int = 0
    first_failing_pair: Optional[NijenhuisFailure] = None

    @model_validator(mode="after")
    def failing_pair_only_when_nonzero(self):
        if self.nijenhuis_zero and self.first_failing_pair is not None:
            raise ValueError("an integrable structure has no failing pair")
        return self

    @property
    def passed(self) -> bool:
        return self.squares_to_minus_id and self.nijenhuis_zero


class HypercomplexReport(BaseModel):
    """Ordered checks of a candidate hypercomplex triple"""
    checks: Dict[str, bool] = Field(default_factory=dict, description="Check name to outcome, in evaluation order")
    first_failure: Optional[str] = Field(default=None, description="Name of the first failing check")
    integrability: Dict[str, IntegrabilityReport] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.first_failure is None


class SevenConditions(BaseModel):
    """The seven equivalent conditions on one factor of an integrable structure"""
    factor: int
    kernel_nonzero: bool = Field(..., description="(i) some nonzero u in the factor has Iu in the factor")
    invariant_plane_unique: bool = Field(..., description="(ii) a unique 2-dim invariant subspace exists")
    off_block_dim_one: bool = Field(..., description="(iii) dim F = 1")
    off_block_rank_le_two: bool = Field(..., description="(iv) rank{X, Y, Z} <= 2")
    brackets_xy_zx_vanish: bool = Field(..., description="(v) [X,Y] = [Z,X] = 0")
    brackets_xy_yz_vanish: bool = Field(..., description="(vi) [X,Y] = [Y,Z] = 0")
    brackets_yz_zx_vanish: bool = Field(..., description="(vii) [Y,Z] = [Z,X] = 0")

    def values(self) -> List[bool]:
        return [
            self.kernel_nonzero, self.invariant_plane_unique, self.off_block_dim_one,
            self.off_block_rank_le_two, self.brackets_xy_zx_vanish, self.brackets_xy_yz_vanish,
            self.brackets_yz_zx_vanish,
        ]

    @property
    def agree(self) -> bool:
        return len(set(self.values())) == 1


class ObstructionReport(BaseModel):
    """Result of chasing the hypercomplex obstruction between two factors"""
    j: int
    k: int
    reached: bool = Field(..., description="Whether every hypothesis held and the obstruction was evaluated")
    failed_hypothesis: Optional[str] = Field(default=None, description="First hypothesis that broke")
    failing_pair: Optional[Tuple[int, int]] = Field(default=None)
    e_j: Optional[List[str]] = None
    lambda_jk: Optional[str] = None
    jacobi_residual: Optional[List[str]] = Field(default=None, description="Jacobi sum for KE_j, E_k, IE_k from the brackets")
    lambda_bracket: Optional[List[str]] = Field(default=None, description="lambda * [IE_k, E_k], which the residual equals")

    @property
    def message(self) -> str:
        if self.reached:
            return f"Jacobi residual {self.jacobi_residual} = lambda*[IE_k,E_k] with lambda={self.lambda_jk}"
        pair = f" at pair {self.failing_pair}" if self.failing_pair else ""
        return f"hypothesis '{self.failed_hypothesis}' failed{pair}"


class SearchReport(BaseModel):
    """Summary of a numerical search"""
    trials: int = Field(..., ge=1)
    best_residual: float
    best_seed: str = Field(..., description="Reproducibility token of the best trial")
    histogram: List[Tuple[float, float, int]] = Field(default_factory=list, description="[lo, hi, count] decade buckets")
    optimize: bool = False
    seed: int = 0


class OracleReport(BaseModel):
    """Float minimum of the reduced coefficient system over random starts"""
    starts: int = Field(..., ge=1)
    steps: int = Field(..., ge=0)
    seed: int = 0
    minimum: float = Field(..., description="Smallest sum of squared residuals found")
    argmin: Dict[str, float] = Field(default_factory=dict, description="Variable values at the minimum")


class ReplayResult(BaseModel):
    """Outcome of replaying a certificate"""
    ok: bool
    steps_checked: int = 0
    failed_step: Optional[int] = None
    message: str = ""
    contradiction: Optional[StepKind] = None


class Subcommand(str, Enum):
    """CLI subcommands"""
    EXAMPLES = "examples"
    CHECK = "check"
    DERIVE_SYSTEM = "derive-system"
    CERTIFY = "certify"
    SEARCH = "search"


class RunConfig(BaseModel):
    """Validated command-line configuration"""
    subcommand: Subcommand
    algebra: Optional[str] = None
    structures: List[str] = Field(default_factory=list)
    factor: Optional[str] = None
    trials: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    optimize: bool = False
    steps: Optional[int] = Field(default=None, ge=1)
    output: Optional[str] = None
    case: Optional[str] = Field(default=None, description="Sub-certificate to emit instead of the full theorem")
    replay: Optional[str] = Field(default=None, description="Certificate file to replay")
    record: bool = False
    verbosity: int = 0
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))

    @model_validator(mode="after")
    def files_exist(self):
        paths = list(self.structures)
        if self.algebra and not _SU2_SHORTHAND.match(self.algebra):
            paths.append(self.algebra)
        if self.replay:
            paths.append(self.replay)
        missing = [p for p in paths if not os.path.isfile(p)]
        if missing:
            raise ValueError(f"no such file: {', '.join(missing)}")
        return self
