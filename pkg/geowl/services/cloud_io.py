"""
点云文件格式

XYZ: 多帧拼接, 每帧第 1 行原子数 n, 第 2 行注释, 随后 n 行 "label x y z";
标签在同一文件内按首次出现顺序编号. JSON 点云用 repr 精度的浮点数, 读写无损.
"""
import csv
import io
import json
import math
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from geowl.config import get_logger
from geowl.errors import InvalidCloud, ParseError
from geowl.models.counterexample import CounterexamplePair, PairProvenance
from geowl.models.point_cloud import PointCloud
from geowl.models.refinement import ModelKind
from geowl.models.symmetry import ScanTable

logger = get_logger(__name__)

CLOUD_FORMAT = "geowl-cloud"
PAIR_FORMAT = "geowl-pairs"
FORMAT_VERSION = 1
_LABEL_PATTERN = re.compile(r"^[A-Za-z0-9]+$")
_CLOUD_SUFFIXES = (".xyz", ".json")


# --------------------------- XYZ ---------------------------
def parse_xyz(text: str) -> List[PointCloud]:
    """解析多帧 XYZ 文本; 空输入返回空列表, 格式错误抛出带行号的 ParseError"""
    lines = text.lstrip("\ufeff").splitlines()
    interned: Dict[str, int] = {}
    clouds: List[PointCloud] = []
    cursor = 0

    while cursor < len(lines):
        header = lines[cursor].strip()
        if not header:
            cursor += 1
            continue
        header_line = cursor + 1
        try:
            count = int(header)
        except ValueError:
            raise ParseError(f"期望原子数, 实际为 {header!r}", line=header_line) from None
        if count < 0:
            raise ParseError(f"原子数不能为负: {count}", line=header_line)

        body_start = cursor + 2
        coords: List[Tuple[float, float, float]] = []
        labels: List[int] = []
        for offset in range(count):
            index = body_start + offset
            if index >= len(lines):
                raise ParseError(f"帧声明 {count} 个原子, 只找到 {offset} 行", line=index + 1)
            fields = lines[index].split()
            if len(fields) != 4:
                raise ParseError(f"期望 'label x y z' 四列, 实际 {len(fields)} 列", line=index + 1)
            label, *values = fields
            if not _LABEL_PATTERN.match(label):
                raise ParseError(f"标签只能由字母和数字组成: {label!r}", line=index + 1)
            try:
                point = tuple(float(value) for value in values)
            except ValueError:
                raise ParseError(f"坐标不是十进制数: {values}", line=index + 1) from None
            if not all(math.isfinite(value) for value in point):
                raise ParseError("坐标包含非有限值", line=index + 1)
            coords.append(point)
            labels.append(interned.setdefault(label, len(interned)))

        try:
            clouds.append(PointCloud(coords, labels))
        except InvalidCloud as exc:
            raise ParseError(exc.message, line=header_line) from None
        cursor = body_start + count

    logger.debug(f"XYZ 解析完成: {len(clouds)} 帧, {len(interned)} 种标签")
    return clouds


def write_xyz(clouds: Sequence[PointCloud], label_names: Optional[Dict[int, str]] = None) -> str:
    """label_names 缺省时有标签写作 X<编号>, 无标签写作 X"""
    out: List[str] = []
    for cloud in clouds:
        out.append(str(cloud.n))
        out.append("")
        for index, point in enumerate(cloud.coords):
            if cloud.is_labeled:
                label = cloud.labels[index]
                name = (label_names or {}).get(label, f"X{label}")
            else:
                name = "X"
            out.append(" ".join([name] + [repr(float(value)) for value in point]))
    return "\n".join(out) + ("\n" if out else "")


# --------------------------- JSON ---------------------------
def cloud_to_dict(cloud: PointCloud) -> Dict[str, Any]:
    return {
        "coords": [[float(value) for value in point] for point in cloud.coords],
        "labels": list(cloud.labels) if cloud.is_labeled else None,
    }


def cloud_from_dict(data: Dict[str, Any]) -> PointCloud:
    if not isinstance(data, dict) or "coords" not in data:
        raise ParseError("JSON 点云缺少 coords 字段")
    try:
        return PointCloud(data["coords"], data.get("labels"))
    except InvalidCloud as exc:
        raise ParseError(exc.message) from None
    except (ValueError, TypeError) as exc:
        raise ParseError(f"JSON 点云字段类型错误: {exc}") from None


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"JSON 格式错误: {exc.msg}", line=exc.lineno) from None


def write_json_clouds(clouds: Sequence[PointCloud]) -> str:
    payload = {
        "format": CLOUD_FORMAT,
        "version": FORMAT_VERSION,
        "clouds": [cloud_to_dict(cloud) for cloud in clouds],
    }
    return json.dumps(payload, indent=2)


def read_json_clouds(text: str) -> List[PointCloud]:
    """接受 {"clouds": [...]} 或单个 {"coords": ...}"""
    data = _load_json(text)
    if isinstance(data, dict) and "clouds" in data:
        return [cloud_from_dict(item) for item in data["clouds"]]
    return [cloud_from_dict(data)]


# --------------------------- 盲对文件 ---------------------------
def pair_to_dict(pair: CounterexamplePair) -> Dict[str, Any]:
    return {
        "p1": cloud_to_dict(pair.p1),
        "p2": cloud_to_dict(pair.p2),
        "provenance": pair.provenance.to_dict(),
        "certificates": {
            "verified_noniso": pair.verified_noniso,
            "verified_blind": {
                model.value: flag
                for model, flag in sorted(pair.verified_blind.items(), key=lambda item: item[0].value)
            },
        },
    }


def pair_from_dict(data: Dict[str, Any]) -> CounterexamplePair:
    certificates = data.get("certificates") or {}
    try:
        blind = {
            ModelKind.parse(key): bool(flag)
            for key, flag in (certificates.get("verified_blind") or {}).items()
        }
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return CounterexamplePair(
        cloud_from_dict(data.get("p1")),
        cloud_from_dict(data.get("p2")),
        PairProvenance.from_dict(data.get("provenance") or {}),
        verified_noniso=certificates.get("verified_noniso"),
        verified_blind=blind,
    )


def write_pair_file(pairs: Sequence[CounterexamplePair]) -> str:
    payload = {
        "format": PAIR_FORMAT,
        "version": FORMAT_VERSION,
        "pairs": [pair_to_dict(pair) for pair in pairs],
    }
    return json.dumps(payload, indent=2)


def read_pair_file(text: str) -> List[CounterexamplePair]:
    data = _load_json(text)
    if not isinstance(data, dict) or data.get("format") != PAIR_FORMAT:
        raise ParseError(f"不是 {PAIR_FORMAT} 文件")
    return [pair_from_dict(item) for item in data.get("pairs", [])]


# --------------------------- 扫描表 ---------------------------
def scan_table_to_csv(table: ScanTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["eps", "proportion_c", "proportion_d"])
    for row in table.rows:
        writer.writerow([repr(row.eps), repr(row.proportion_c), repr(row.proportion_d)])
    return buffer.getvalue()


# --------------------------- 文件入口 ---------------------------
def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"无法读取文件 {path}: {exc.strerror}", path=str(path)) from None
    except UnicodeDecodeError:
        raise ParseError(f"文件 {path} 不是 UTF-8 文本", path=str(path)) from None


def load_clouds(path: str) -> List[PointCloud]:
    """按后缀读取 XYZ 或 JSON 点云; 目录则按文件名顺序读取其中全部点云文件"""
    target = Path(path)
    if target.is_dir():
        clouds: List[PointCloud] = []
        for child in sorted(target.iterdir()):
            if child.suffix.lower() in _CLOUD_SUFFIXES:
                clouds.extend(load_clouds(str(child)))
        return clouds
    text = _read_text(target)
    if target.suffix.lower() == ".json":
        return read_json_clouds(text)
    return parse_xyz(text)


def load_single_cloud(path: str) -> PointCloud:
    clouds = load_clouds(path)
    if len(clouds) != 1:
        raise ParseError(f"{path} 应只包含一个点云, 实际 {len(clouds)} 个", path=path)
    return clouds[0]


def load_pairs(path: str) -> List[CounterexamplePair]:
    return read_pair_file(_read_text(Path(path)))
