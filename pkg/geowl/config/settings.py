"""
运行配置
默认值 < 配置文件(KEY=value 文本, 由 python-dotenv 解析) < 命令行参数
"""
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from geowl.errors import ConfigError
from geowl.models.point_cloud import Quantizer
from geowl.models.refinement import RefineConfig

DEFAULT_EPS_GRID = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1]


def default_threads() -> int:
    """GEOWL_THREADS 限制并行度，缺省单线程"""
    raw = os.getenv("GEOWL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


class RunConfig(BaseModel):
    """一次命令调用的完整有效配置，所有报告都会嵌入它"""

    model_config = ConfigDict(extra="forbid")

    n_in: int = Field(default=5, ge=1, description="GeoNGNN 内层迭代轮数")
    n_out: int = Field(default=1, ge=0, description="GeoNGNN 外层迭代轮数, 0 表示只做池化")
    r_sub: float = Field(default=math.inf, gt=0, description="子图半径")
    r_cutoff: float = Field(default=math.inf, gt=0, description="相互作用截断距离")
    max_iters: Optional[int] = Field(default=None, ge=1, description="稳定化迭代上限, 缺省按模型取 2n+4 / 2n+6")
    decimals: int = Field(default=9, ge=0, le=12, description="距离量化保留的小数位 r")
    eps: float = Field(default=1e-6, gt=0, description="对称性判定的偏差容差 ε")
    eps_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_EPS_GRID))
    seed: int = Field(default=0, description="随机命令的种子")
    threads: int = Field(default_factory=default_threads, ge=1)
    output: Optional[str] = Field(default=None, description="报告输出路径, 缺省写 stdout")
    iso_budget: int = Field(default=1_000_000, ge=1, description="同构判定的回溯节点预算")
    iso_tol: float = Field(default=1e-6, gt=0, description="同构判定的 RMSD 容差")
    search_budget: int = Field(default=1_000_000, ge=1, description="反例搜索枚举的子集上限")
    pin_timestamp: bool = Field(default=False, description="报告中是否写入生成时间")

    @field_validator("r_sub", "r_cutoff", mode="before")
    @classmethod
    def _parse_radius(cls, value: Any) -> Any:
        if isinstance(value, str) and value.strip().lower() in {"inf", "+inf", "infinity", "none", ""}:
            return math.inf
        return value

    @field_validator("eps_grid", mode="before")
    @classmethod
    def _parse_grid(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [float(item) for item in value.split(",") if item.strip()]
        return value

    @field_validator("eps_grid")
    @classmethod
    def _check_grid(cls, value: List[float]) -> List[float]:
        if not value or any(item <= 0 for item in value):
            raise ValueError("eps_grid 必须是非空的正数列表")
        return sorted(value)

    @property
    def quantizer(self) -> Quantizer:
        return Quantizer(self.decimals)

    def to_refine_config(self) -> RefineConfig:
        return RefineConfig(
            n_in=self.n_in,
            n_out=self.n_out,
            r_sub=self.r_sub,
            r_cutoff=self.r_cutoff,
            max_iters=self.max_iters,
            quantizer=self.quantizer,
            threads=self.threads,
        )

    def to_report(self) -> Dict[str, Any]:
        """JSON 友好的配置快照, 无穷大写成字符串"""
        data = self.model_dump()
        for key in ("r_sub", "r_cutoff"):
            if math.isinf(data[key]):
                data[key] = "inf"
        return data


def load_run_config(
    config_path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """读取配置文件并叠加命令行覆盖项, 未知键直接拒绝"""
    values: Dict[str, Any] = {}

    if config_path:
        path = Path(config_path)
        if not path.is_file():
            raise ConfigError(f"配置文件不存在: {config_path}", path=config_path)
        for key, raw in dotenv_values(path).items():
            if raw is None:
                raise ConfigError(f"配置项缺少取值: {key}", key=key)
            values[key.strip().lower()] = raw

    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})

    try:
        return RunConfig(**values)
    except ValidationError as exc:
        errors = [
            {"field": ".".join(str(part) for part in err["loc"]), "reason": err["msg"]}
            for err in exc.errors()
        ]
        raise ConfigError("配置校验失败", errors=errors) from exc
