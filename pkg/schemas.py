"""
Pydantic models for input files and machine-readable reports
"""

import json
from typing import Any, Dict, List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from errors import InputError

ScalarLiteral = Union[int, List[int]]
MatrixLiteral = List[List[ScalarLiteral]]


class Verdict(BaseModel):
    """One named pass/fail certificate"""
    name: str
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)


class RingFields(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    a: int = 1
    N: Optional[int] = None
    modulus: Optional[List[int]] = None


class CrystalFile(RingFields):
    """A crystal; the form, c and kind fields make it a self-dual crystal"""
    n: int
    matrix: MatrixLiteral
    form: Optional[MatrixLiteral] = None
    c: Optional[ScalarLiteral] = None
    kind: Optional[Literal["symplectic", "orthogonal"]] = None

    @property
    def is_self_dual(self) -> bool:
        return self.form is not None and self.c is not None and self.kind is not None


class FamilyShared(RingFields):
    n: int
    kind: Literal["symplectic", "orthogonal"]
    breakpoint: List[Union[int, str]] = Field(min_length=2, max_length=2)


class FiberEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: MatrixLiteral
    form: MatrixLiteral
    c: ScalarLiteral


class FamilyFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    shared: FamilyShared
    fibers: List[FiberEntry] = Field(min_length=1)


class Report(BaseModel):
    """Machine-readable result of one CLI command"""
    command: str
    options: Dict[str, Any] = Field(default_factory=dict)
    input_digest: Optional[str] = None
    verdicts: List[Verdict] = Field(default_factory=list)
    achieved_precision: Optional[int] = None
    exit_code: int = 0
    data: Dict[str, Any] = Field(default_factory=dict)

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.model_dump(), indent=indent) + "\n"


ModelT = TypeVar("ModelT", bound=BaseModel)


def parse_file(model: Type[ModelT], raw: bytes) -> ModelT:
    """Parse JSON bytes into `model`, surfacing every failure as InputError"""
    try:
        return model.model_validate_json(raw)
    except ValidationError as e:
        raise InputError(f"invalid {model.__name__}: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}") from e


def report_schema() -> Dict[str, Any]:
    return Report.model_json_schema()
