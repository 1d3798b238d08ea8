"""
统一的领域异常定义
库函数只负责抛出异常，由命令层转换为退出码和机器可读的错误对象
"""
from typing import Any, Dict, Optional


class GeoWLError(Exception):
    """所有领域异常的基类"""

    code = "geowl_error"
    # 1: 输入/配置错误, 2: 内部错误
    exit_code = 2

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "status": "error",
            "code": self.code,
            "message": self.message,
        }
        if self.details:
            payload["details"] = self.details
        return payload


class InvalidCloud(GeoWLError):
    code = "invalid_cloud"
    exit_code = 1


class DegenerateCloud(GeoWLError):
    code = "degenerate_cloud"
    exit_code = 1


class TooLarge(GeoWLError):
    code = "too_large"


class NoStabilization(GeoWLError):
    code = "no_stabilization"


class ZeroMass(GeoWLError):
    code = "zero_mass"
    exit_code = 1


class NegativeRadicand(GeoWLError):
    code = "negative_radicand"


class CoincidentAnchors(GeoWLError):
    code = "coincident_anchors"
    exit_code = 1


class InconsistentDistances(GeoWLError):
    code = "inconsistent_distances"


class MissingOrientation(GeoWLError):
    code = "missing_orientation"
    exit_code = 1


class NotCentered(GeoWLError):
    code = "not_centered"
    exit_code = 1


class VerificationFailed(GeoWLError):
    code = "verification_failed"


class BudgetExhausted(GeoWLError):
    code = "budget_exhausted"


class ConfigError(GeoWLError):
    code = "config_error"
    exit_code = 1


class ParseError(GeoWLError):
    code = "parse_error"
    exit_code = 1

    def __init__(self, message: str, line: Optional[int] = None, **details: Any) -> None:
        if line is not None:
            details["line"] = line
        super().__init__(f"第 {line} 行: {message}" if line is not None else message, **details)
        self.line = line
