"""Parse verify/bench suite files (YAML)."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional
import yaml

from .errors import PolygonParseError
from .polygon_store import read_polygon
from .runner import Instance
from ..generators.testgen import DegenerateKind, Family, GenSpec, generate


@dataclass
class InstanceGroup:
    """A family swept over sizes and seeds."""

    family: str
    sizes: List[int] = field(default_factory=list)
    seeds: List[int] = field(default_factory=lambda: [0])
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass
class SuiteConfig:
    """Configuration for a verify or bench run."""

    instances: List[InstanceGroup] = field(default_factory=list)
    files: List[str] = field(default_factory=list)
    algorithms: List[str] = field(default_factory=lambda: ["const"])
    s_values: List[int] = field(default_factory=lambda: [1])
    rng_seeds: List[int] = field(default_factory=lambda: [0])
    repetitions: int = 1
    strict: Optional[bool] = None
    threads: int = 1

    def build_instances(self, base_dir: Optional[Path] = None) -> List[Instance]:
        """
        Expand groups and files into concrete instances.

        Args:
            base_dir: Directory relative file paths are resolved against

        Returns:
            Instances in suite order
        """
        out: List[Instance] = []
        for group in self.instances:
            family = Family(group.family)
            for size in group.sizes:
                for seed in group.seeds:
                    spec = GenSpec(family, size, seed, dict(group.params))
                    vertices, q = generate(spec)
                    out.append(Instance(spec.label(), family.value, vertices, q))
        for name in self.files:
            path = Path(name)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            vertices, q = read_polygon(path)
            out.append(Instance(path.name, "file", vertices, q))
        return out


DEFAULT_VERIFY_SUITE: Dict[str, Any] = {
    "instances": [
        {"family": "convex", "sizes": [3, 4, 5, 6, 8, 12, 16, 24, 32, 64], "seeds": list(range(7))},
        {"family": "comb", "sizes": list(range(1, 65)), "seeds": [0, 1, 2]},
        {"family": "star", "sizes": [8, 10, 12, 16, 20, 24, 32, 48, 64, 96, 128, 160, 192, 256],
         "seeds": [0, 1, 2, 3, 4], "params": {"offset": ["21/20", "1/3"]}},
    ],
    "algorithms": ["const"],
    "s_values": [1],
    "rng_seeds": [0],
}


class ConfigParser:
    """Parser for suite YAML files."""

    def __init__(self, config_path: Path):
        """
        Initialize the config parser.

        Args:
            config_path: Path to the suite file
        """
        self.config_path = config_path
        self.config_dir = config_path.parent

    def parse(self) -> SuiteConfig:
        """
        Parse the suite file.

        Returns:
            SuiteConfig with parsed configuration

        Raises:
            PolygonParseError: If the file is not a mapping or has malformed entries
        """
        with open(self.config_path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise PolygonParseError(f"{self.config_path}: suite file must be a mapping")
        config = parse_suite(data)
        config.files = [str(self.config_dir / f) if not Path(f).is_absolute() else f
                        for f in config.files]
        return config


def parse_suite(data: Dict[str, Any]) -> SuiteConfig:
    """Build a SuiteConfig from an already-loaded mapping."""
    groups = []
    for entry in data.get('instances', []) or []:
        if not isinstance(entry, dict) or 'family' not in entry:
            raise PolygonParseError(f"instance group needs a 'family' key: {entry!r}")
        try:
            Family(entry['family'])
        except ValueError:
            raise PolygonParseError(f"unknown family {entry['family']!r}")
        sizes = entry.get('sizes', [])
        if isinstance(sizes, int):
            sizes = [sizes]
        seeds = entry.get('seeds', [0])
        if isinstance(seeds, int):
            seeds = [seeds]
        params = dict(entry.get('params', {}) or {})
        if 'kind' in params:
            params['kind'] = DegenerateKind(params['kind'])
        groups.append(InstanceGroup(entry['family'], list(sizes), list(seeds), params))

    return SuiteConfig(
        instances=groups,
        files=list(data.get('files', []) or []),
        algorithms=list(data.get('algorithms', ["const"])),
        s_values=[int(s) for s in data.get('s_values', [1])],
        rng_seeds=[int(s) for s in data.get('rng_seeds', [0])],
        repetitions=int(data.get('repetitions', 1)),
        strict=data.get('strict'),
        threads=int(data.get('threads', 1)),
    )


def default_verify_suite() -> SuiteConfig:
    """The built-in suite: convex, comb m in [1, 64], displaced stars n in [8, 256]."""
    return parse_suite(DEFAULT_VERIFY_SUITE)


def load_config(config_path: Path) -> SuiteConfig:
    """
    Convenience function to load and parse a suite file.

    Args:
        config_path: Path to the YAML suite

    Returns:
        Parsed SuiteConfig
    """
    parser = ConfigParser(config_path)
    return parser.parse()
