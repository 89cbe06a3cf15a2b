"""Canonical data model: backlog items, environments, releases, datasets.

All values are immutable after construction and validated eagerly, so a
``Dataset`` that exists is a ``Dataset`` whose invariants hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from swphm.errors import ValidationError

KINDS = ("fault", "enhancement")
SEVERITIES = ("Critical", "Major", "Medium", "Minor")
STORY_POINT_SCALE = (1, 2, 3, 5, 8)


@dataclass(frozen=True)
class BacklogItem:
    """One fault or enhancement request.

    ``severity`` and ``story_points`` may be absent; the text classifiers can
    fill them later. ``sign`` is -1 only for items explicitly marked as
    performance-improving.
    """

    id: str
    title: str = ""
    description: str = ""
    kind: str = "fault"
    severity: str | None = None
    story_points: int | None = None
    sign: int = 1

    def __post_init__(self):
        if not self.id:
            raise ValidationError("backlog item has empty id", code="empty-id")
        if self.kind not in KINDS:
            raise ValidationError(
                f"item {self.id!r}: unknown kind {self.kind!r}", code="invalid-kind"
            )
        if self.severity is not None and self.severity not in SEVERITIES:
            raise ValidationError(
                f"item {self.id!r}: unknown severity {self.severity!r}",
                code="invalid-severity",
            )
        if self.story_points is not None and self.story_points not in STORY_POINT_SCALE:
            raise ValidationError(
                f"item {self.id!r}: invalid story points {self.story_points!r}, "
                f"must be one of {STORY_POINT_SCALE}",
                code="invalid-story-points",
            )
        if self.sign not in (1, -1):
            raise ValidationError(
                f"item {self.id!r}: sign must be +1 or -1, got {self.sign!r}",
                code="invalid-sign",
            )

    @property
    def text(self) -> str:
        return f"{self.title} {self.description}".strip()


@dataclass(frozen=True)
class EnvironmentSpec:
    """Test-bed environment: OS word size and hardware figures."""

    os_bits: int = 64
    clock_ghz: float = 1.8
    ram_gb: float = 4.0
    disk_gb: float = 50.0

    def __post_init__(self):
        if self.os_bits not in (32, 64):
            raise ValidationError(
                f"os_bits must be 32 or 64, got {self.os_bits!r}", code="invalid-env"
            )
        for name in ("clock_ghz", "ram_gb", "disk_gb"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise ValidationError(
                    f"{name} must be a positive number, got {value!r}",
                    code="invalid-env",
                )


@dataclass(frozen=True)
class ReleaseRecord:
    """A versioned release: its items, environment, and measured RT runs.

    ``rt_runs_ms`` holds per-run mean response times in milliseconds and is
    empty for releases not yet measured.
    """

    version: str
    items: tuple[str, ...] = ()
    env: EnvironmentSpec = field(default_factory=EnvironmentSpec)
    rt_runs_ms: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.version:
            raise ValidationError("release has empty version", code="invalid-version")
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "rt_runs_ms", tuple(float(x) for x in self.rt_runs_ms))
        for rt in self.rt_runs_ms:
            if not rt > 0:
                raise ValidationError(
                    f"release {self.version!r}: non-positive RT run {rt!r}",
                    code="invalid-rt-run",
                )


def version_key(version: str) -> tuple:
    """Sort key for version strings.

    Dotted components compare left-to-right; numeric components compare as
    integers and sort before non-numeric ones, which compare lexicographically.
    """
    parts = []
    for comp in version.split("."):
        if comp.isdigit():
            parts.append((0, int(comp), ""))
        else:
            parts.append((1, 0, comp))
    return tuple(parts)


def mean_rt(release: ReleaseRecord) -> float:
    """Arithmetic mean of the per-run mean response times, in ms."""
    if not release.rt_runs_ms:
        raise ValidationError(
            f"release {release.version!r}: no measurements", code="no-measurements"
        )
    return sum(release.rt_runs_ms) / len(release.rt_runs_ms)


@dataclass(frozen=True)
class Dataset:
    """Validated backlog plus ordered release history.

    Construction checks that every release item id resolves, no item appears
    in two releases, and versions are strictly ordered.
    """

    items: dict[str, BacklogItem]
    releases: tuple[ReleaseRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "releases", tuple(self.releases))
        seen_versions = set()
        for rel in self.releases:
            key = version_key(rel.version)
            if key in seen_versions:
                raise ValidationError(
                    f"duplicate or unorderable version {rel.version!r}",
                    code="unorderable-versions",
                )
            seen_versions.add(key)
        keys = [version_key(r.version) for r in self.releases]
        if keys != sorted(keys):
            raise ValidationError(
                "releases are not in version order", code="unordered-releases"
            )
        owner: dict[str, str] = {}
        for rel in self.releases:
            for item_id in rel.items:
                if item_id not in self.items:
                    raise ValidationError(
                        f"release {rel.version!r} references unknown item {item_id!r}",
                        code="unknown-item",
                    )
                if item_id in owner:
                    raise ValidationError(
                        f"item {item_id!r} appears in releases "
                        f"{owner[item_id]!r} and {rel.version!r}",
                        code="item-in-two-releases",
                    )
                owner[item_id] = rel.version

    def measured_releases(self) -> tuple[ReleaseRecord, ...]:
        return tuple(r for r in self.releases if r.rt_runs_ms)
