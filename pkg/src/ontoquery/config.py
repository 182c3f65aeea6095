"""Deployment configuration: which schema and datasets to serve, plus
operational limits. Read from a TOML file; all paths resolve relative
to the file's own directory."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .errors import ConfigError

DEFAULT_SUGGESTION_LIMIT = 20
DEFAULT_PATH_MAX_LENGTH = 6
DEFAULT_CACHE_CAPACITY = 256
DEFAULT_SESSION_IDLE_SECONDS = 7200.0
DEFAULT_LISTEN = "127.0.0.1:8000"


@dataclass(frozen=True)
class DatasetSpec:
    dataset_id: str
    label: str
    path: Path


@dataclass(frozen=True)
class EnrichmentConfig:
    service: str = "stub"  # "stub" | "http"
    base_url: str = "https://blast.ncbi.nlm.nih.gov/Blast.cgi"
    timeout: float = 30.0


@dataclass(frozen=True)
class Deployment:
    schema_path: Path
    datasets: tuple[DatasetSpec, ...]
    suggestion_limit: int = DEFAULT_SUGGESTION_LIMIT
    path_max_length: int = DEFAULT_PATH_MAX_LENGTH
    cache_capacity: int = DEFAULT_CACHE_CAPACITY
    session_idle_seconds: float = DEFAULT_SESSION_IDLE_SECONDS
    listen: str = DEFAULT_LISTEN
    enrichment: EnrichmentConfig = field(default_factory=EnrichmentConfig)

    @property
    def listen_host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def listen_port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


def _positive_int(raw: dict, key: str, default: int) -> int:
    value = raw.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"{key} must be a positive integer, got {value!r}")
    return value


def load_deployment(path: str | Path) -> Deployment:
    """Parse and validate a deployment file. Validation problems raise
    ConfigError; unreadable files raise the underlying OSError."""
    config_path = Path(path)
    with open(config_path, "rb") as handle:
        try:
            raw = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{config_path}: {exc}") from exc
    base = config_path.parent

    schema = raw.get("schema")
    if not isinstance(schema, str) or not schema:
        raise ConfigError("'schema' must name the schema document path")

    dataset_entries = raw.get("datasets")
    if not isinstance(dataset_entries, list) or not dataset_entries:
        raise ConfigError("at least one [[datasets]] entry is required")
    specs = []
    seen = set()
    for entry in dataset_entries:
        if not isinstance(entry, dict):
            raise ConfigError("each [[datasets]] entry must be a table")
        dataset_id = entry.get("id")
        dataset_path = entry.get("path")
        if not isinstance(dataset_id, str) or not dataset_id:
            raise ConfigError("every dataset needs a non-empty 'id'")
        if dataset_id == "all":
            raise ConfigError("dataset id 'all' is reserved for the union selector")
        if dataset_id in seen:
            raise ConfigError(f"duplicate dataset id {dataset_id!r}")
        seen.add(dataset_id)
        if not isinstance(dataset_path, str) or not dataset_path:
            raise ConfigError(f"dataset {dataset_id!r} needs a 'path'")
        label = entry.get("label", dataset_id)
        if not isinstance(label, str):
            raise ConfigError(f"dataset {dataset_id!r}: 'label' must be a string")
        specs.append(DatasetSpec(dataset_id=dataset_id, label=label, path=base / dataset_path))

    listen = raw.get("listen", DEFAULT_LISTEN)
    if not isinstance(listen, str) or ":" not in listen:
        raise ConfigError(f"'listen' must look like host:port, got {listen!r}")
    try:
        port = int(listen.rsplit(":", 1)[1])
    except ValueError as exc:
        raise ConfigError(f"'listen' port is not a number: {listen!r}") from exc
    if not 0 < port < 65536:
        raise ConfigError(f"'listen' port out of range: {port}")

    idle = raw.get("session_idle_seconds", DEFAULT_SESSION_IDLE_SECONDS)
    if not isinstance(idle, (int, float)) or isinstance(idle, bool) or idle <= 0:
        raise ConfigError(f"session_idle_seconds must be positive, got {idle!r}")

    enrichment_raw = raw.get("enrichment", {})
    if not isinstance(enrichment_raw, dict):
        raise ConfigError("[enrichment] must be a table")
    service = enrichment_raw.get("service", "stub")
    if service not in ("stub", "http"):
        raise ConfigError(f"enrichment service must be 'stub' or 'http', got {service!r}")
    timeout = enrichment_raw.get("timeout", 30.0)
    if not isinstance(timeout, (int, float)) or isinstance(timeout, bool) or timeout <= 0:
        raise ConfigError(f"enrichment timeout must be positive, got {timeout!r}")
    base_url = enrichment_raw.get("base_url", EnrichmentConfig.base_url)
    if not isinstance(base_url, str) or not base_url:
        raise ConfigError("enrichment base_url must be a non-empty string")

    path_max_length = _positive_int(raw, "path_max_length", DEFAULT_PATH_MAX_LENGTH)
    if path_max_length > 8:
        raise ConfigError(f"path_max_length may not exceed 8, got {path_max_length}")

    return Deployment(
        schema_path=base / schema,
        datasets=tuple(specs),
        suggestion_limit=_positive_int(raw, "suggestion_limit", DEFAULT_SUGGESTION_LIMIT),
        path_max_length=path_max_length,
        cache_capacity=_positive_int(raw, "cache_capacity", DEFAULT_CACHE_CAPACITY),
        session_idle_seconds=float(idle),
        listen=listen,
        enrichment=EnrichmentConfig(service=service, base_url=base_url, timeout=float(timeout)),
    )
