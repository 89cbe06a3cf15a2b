"""Parse and serialize backlog, release, and measurement files.

Two formats per file kind: JSON (canonical) and CSV (header row mandatory,
UTF-8, comma-separated, quoted free text). List-valued CSV cells use ``;``
as the inner separator.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from swphm.errors import ValidationError
from swphm.model import (
    BacklogItem,
    Dataset,
    EnvironmentSpec,
    ReleaseRecord,
    version_key,
)

_BACKLOG_CSV_COLUMNS = ["id", "title", "description", "kind", "severity", "story_points", "sign"]
_RELEASE_CSV_COLUMNS = ["version", "items", "os_bits", "clock_ghz", "ram_gb", "disk_gb", "rt_runs_ms"]


def _detect_format(path: str | Path, format: str | None) -> str:
    if format is not None:
        if format not in ("json", "csv"):
            raise ValidationError(f"unknown format {format!r}", code="invalid-format")
        return format
    return "csv" if str(path).endswith(".csv") else "json"


def _item_from_record(record: dict, where: str) -> BacklogItem:
    if not isinstance(record, dict):
        raise ValidationError(f"{where}: record is not an object", code="malformed-record")
    if "id" not in record or record["id"] in (None, ""):
        raise ValidationError(f"{where}: missing field 'id'", code="malformed-record")
    known = {}
    for field_name in ("id", "title", "description", "kind", "severity"):
        if record.get(field_name) is not None:
            value = record[field_name]
            if not isinstance(value, str):
                raise ValidationError(
                    f"{where}: field {field_name!r} must be a string", code="malformed-record"
                )
            known[field_name] = value
    if record.get("story_points") is not None:
        sp = record["story_points"]
        if isinstance(sp, bool) or not isinstance(sp, (int, float)) or int(sp) != sp:
            raise ValidationError(
                f"{where}: field 'story_points' must be an integer", code="malformed-record"
            )
        known["story_points"] = int(sp)
    if record.get("sign") is not None:
        sign = record["sign"]
        if isinstance(sign, bool) or not isinstance(sign, (int, float)) or int(sign) != sign:
            raise ValidationError(
                f"{where}: field 'sign' must be +1 or -1", code="malformed-record"
            )
        known["sign"] = int(sign)
    return BacklogItem(**known)


def parse_backlog(path: str | Path, format: str | None = None) -> list[BacklogItem]:
    """Read backlog items from a JSON array or CSV file, in file order.

    Unknown fields are ignored; defaults are applied (sign=+1). Raises
    ``ValidationError`` naming the offending record for malformed entries,
    duplicate ids, or out-of-scale story points.
    """
    path = Path(path)
    fmt = _detect_format(path, format)
    if fmt == "json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}", code="malformed-file") from exc
        if not isinstance(data, list):
            raise ValidationError(f"{path}: expected a JSON array", code="malformed-file")
        records = list(enumerate(data))
    else:
        records = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "id" not in reader.fieldnames:
                raise ValidationError(f"{path}: CSV header row with 'id' required", code="malformed-file")
            for i, row in enumerate(reader):
                record = {k: v for k, v in row.items() if v not in (None, "")}
                for int_field in ("story_points", "sign"):
                    if int_field in record:
                        try:
                            record[int_field] = int(record[int_field])
                        except ValueError:
                            raise ValidationError(
                                f"{path} line {i + 2}: field {int_field!r} is not an integer",
                                code="malformed-record",
                            ) from None
                records.append((i, record))

    items: list[BacklogItem] = []
    seen: set[str] = set()
    for i, record in records:
        where = f"{path} record {i + 1}"
        item = _item_from_record(record, where)
        if item.id in seen:
            raise ValidationError(f"{where}: duplicate id {item.id!r}", code="duplicate-id")
        seen.add(item.id)
        items.append(item)
    return items


def _env_from_record(record: dict, where: str) -> EnvironmentSpec:
    if not isinstance(record, dict):
        raise ValidationError(f"{where}: 'env' is not an object", code="malformed-record")
    try:
        return EnvironmentSpec(
            os_bits=int(record.get("os_bits", 64)),
            clock_ghz=float(record.get("clock_ghz", 1.8)),
            ram_gb=float(record.get("ram_gb", 4.0)),
            disk_gb=float(record.get("disk_gb", 50.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: bad env value: {exc}", code="malformed-record") from exc


def parse_measurements(path: str | Path, format: str | None = None) -> list[ReleaseRecord]:
    """Read release records, returned sorted by version.

    Raises on non-positive RT runs and on duplicate (unorderable) versions.
    """
    path = Path(path)
    fmt = _detect_format(path, format)
    releases: list[ReleaseRecord] = []
    if fmt == "json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}", code="malformed-file") from exc
        if not isinstance(data, list):
            raise ValidationError(f"{path}: expected a JSON array", code="malformed-file")
        for i, record in enumerate(data):
            where = f"{path} record {i + 1}"
            if not isinstance(record, dict) or "version" not in record:
                raise ValidationError(f"{where}: missing field 'version'", code="malformed-record")
            item_ids = record.get("items", [])
            if not isinstance(item_ids, list) or not all(isinstance(x, str) for x in item_ids):
                raise ValidationError(f"{where}: 'items' must be a list of ids", code="malformed-record")
            runs = record.get("rt_runs_ms", [])
            if not isinstance(runs, list):
                raise ValidationError(f"{where}: 'rt_runs_ms' must be a list", code="malformed-record")
            releases.append(
                ReleaseRecord(
                    version=str(record["version"]),
                    items=tuple(item_ids),
                    env=_env_from_record(record.get("env", {}), where),
                    rt_runs_ms=tuple(runs),
                )
            )
    else:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "version" not in reader.fieldnames:
                raise ValidationError(f"{path}: CSV header row with 'version' required", code="malformed-file")
            for i, row in enumerate(reader):
                where = f"{path} line {i + 2}"
                item_ids = tuple(x for x in (row.get("items") or "").split(";") if x)
                try:
                    runs = tuple(float(x) for x in (row.get("rt_runs_ms") or "").split(";") if x)
                except ValueError:
                    raise ValidationError(f"{where}: bad rt_runs_ms", code="malformed-record") from None
                env_record = {k: row[k] for k in ("os_bits", "clock_ghz", "ram_gb", "disk_gb") if row.get(k)}
                releases.append(
                    ReleaseRecord(
                        version=row["version"],
                        items=item_ids,
                        env=_env_from_record(env_record, where),
                        rt_runs_ms=runs,
                    )
                )

    seen = set()
    for rel in releases:
        key = version_key(rel.version)
        if key in seen:
            raise ValidationError(
                f"{path}: duplicate or unorderable version {rel.version!r}",
                code="unorderable-versions",
            )
        seen.add(key)
    releases.sort(key=lambda r: version_key(r.version))
    return releases


def load_dataset(backlog_path: str | Path, releases_path: str | Path) -> Dataset:
    """Parse both files and return a fully validated Dataset."""
    items = parse_backlog(backlog_path)
    releases = parse_measurements(releases_path)
    return Dataset(items={it.id: it for it in items}, releases=tuple(releases))


# -- serialization ------------------------------------------------------

def item_to_record(item: BacklogItem) -> dict:
    record = {
        "id": item.id,
        "title": item.title,
        "description": item.description,
        "kind": item.kind,
        "sign": item.sign,
    }
    if item.severity is not None:
        record["severity"] = item.severity
    if item.story_points is not None:
        record["story_points"] = item.story_points
    return record


def env_to_record(env: EnvironmentSpec) -> dict:
    return {
        "os_bits": env.os_bits,
        "clock_ghz": env.clock_ghz,
        "ram_gb": env.ram_gb,
        "disk_gb": env.disk_gb,
    }


def release_to_record(rel: ReleaseRecord) -> dict:
    return {
        "version": rel.version,
        "items": list(rel.items),
        "env": env_to_record(rel.env),
        "rt_runs_ms": list(rel.rt_runs_ms),
    }


def dump_json(payload, path: str | Path) -> None:
    """Write deterministic JSON: sorted keys, stable separators, newline EOF."""
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_backlog(items: list[BacklogItem], path: str | Path, format: str | None = None) -> None:
    fmt = _detect_format(path, format)
    if fmt == "json":
        dump_json([item_to_record(it) for it in items], path)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=_BACKLOG_CSV_COLUMNS)
        writer.writeheader()
        for it in items:
            record = item_to_record(it)
            writer.writerow({col: record.get(col, "") for col in _BACKLOG_CSV_COLUMNS})


def write_releases(releases: list[ReleaseRecord], path: str | Path, format: str | None = None) -> None:
    fmt = _detect_format(path, format)
    if fmt == "json":
        dump_json([release_to_record(r) for r in releases], path)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=_RELEASE_CSV_COLUMNS)
        writer.writeheader()
        for rel in releases:
            writer.writerow(
                {
                    "version": rel.version,
                    "items": ";".join(rel.items),
                    "os_bits": rel.env.os_bits,
                    "clock_ghz": rel.env.clock_ghz,
                    "ram_gb": rel.env.ram_gb,
                    "disk_gb": rel.env.disk_gb,
                    "rt_runs_ms": ";".join(repr(x) for x in rel.rt_runs_ms),
                }
            )
