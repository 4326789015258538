import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ..core.density import IndexSet
from ..core.dynprops import TransitionGraph
from ..core.pseudo_orbit import OrbitKind, PseudoOrbit, pseudo_orbit_from_points
from ..core.spaces import SystemHandle, format_point, parse_point
from ..core.verify import TraceReport
from ..exceptions import OutputError, ShadowLabError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
HEADER_PREFIX = '# '
ORBIT_HEADER_KEYS = ('system', 'delta', 'kind', 'seed', 'horizon', 'junctions')


def _indices(text: str) -> Tuple[int, ...]:
    return tuple(int(v) for v in text.split())


class FileService:
    """
    Service for reading and writing experiment artifacts.

    Provides:
    - CSV tables through pandas, floats with 17 significant digits
    - JSON reports and SVG text
    - the pseudo-orbit text format (header, one point per line, break set)
    - transition graphs as node and edge tables

    Every filesystem failure is raised as :class:`OutputError`.
    """

    def __init__(self):
        self.logger = logger
        self._executor = ThreadPoolExecutor()

    def ensure_directory(self, directory: str) -> Path:
        path = Path(directory)
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            self.logger.error(f"Cannot create output directory {path}: {str(e)}", exc_info=True)
            raise OutputError(f"Cannot create output directory {path}: {e}") from e
        return path

    def write_text(self, text: str, file_path: str) -> str:
        path = Path(file_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8')
        except OSError as e:
            self.logger.error(f"Error writing {path}: {str(e)}", exc_info=True)
            raise OutputError(f"Cannot write {path}: {e}") from e
        self.logger.debug(f"Wrote {path} ({len(text)} characters)")
        return str(path)

    def read_text(self, file_path: str) -> str:
        path = Path(file_path)
        try:
            return path.read_text(encoding='utf-8')
        except OSError as e:
            self.logger.error(f"Error reading {path}: {str(e)}", exc_info=True)
            raise OutputError(f"Cannot read {path}: {e}") from e

    def write_csv(self, table: pd.DataFrame, file_path: str) -> str:
        """Write ``table`` without its index; floats round-trip exactly."""
        path = Path(file_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            table.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        except OSError as e:
            self.logger.error(f"Error writing CSV {path}: {str(e)}", exc_info=True)
            raise OutputError(f"Cannot write {path}: {e}") from e
        self.logger.debug(f"Wrote {len(table)} rows to {path}")
        return str(path)

    def read_csv(self, file_path: str) -> pd.DataFrame:
        path = Path(file_path)
        try:
            return pd.read_csv(path)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            self.logger.error(f"Error reading CSV {path}: {str(e)}", exc_info=True)
            raise OutputError(f"Cannot read {path}: {e}") from e

    def write_trace_csv(self, report: TraceReport, file_path: str) -> str:
        """Trace errors as (index, error) rows."""
        table = pd.DataFrame({'index': range(report.horizon), 'error': report.errors})
        return self.write_csv(table, file_path)

    # -----------------------------------------------------------------------
    # pseudo orbits

    def format_pseudo_orbit(self, s: SystemHandle, p: PseudoOrbit) -> str:
        """
        Text form of a pseudo orbit::

            # system: doubling-circle
            # delta: 0.031415926535897934
            # kind: delta_ergodic
            # seed: 7
            # horizon: 4096
            # junctions: 0 2 6 ...
            <one point per line>
            # break_set: 0 2 6 ...
        """
        header = {
            'system': p.system_name,
            'delta': FLOAT_FORMAT % p.delta,
            'kind': p.kind.value,
            'seed': '' if p.seed is None else str(p.seed),
            'horizon': str(p.horizon),
            'junctions': ' '.join(str(j) for j in p.junctions),
        }
        lines = [f"{HEADER_PREFIX}{key}: {header[key]}".rstrip() for key in ORBIT_HEADER_KEYS]
        lines.extend(format_point(s, point) for point in p.points)
        lines.append(f"{HEADER_PREFIX}break_set: {' '.join(str(b) for b in p.break_set)}".rstrip())
        return '\n'.join(lines) + '\n'

    def parse_pseudo_orbit(self, s: SystemHandle, text: str) -> PseudoOrbit:
        """
        Inverse of :meth:`format_pseudo_orbit`.

        The break set is recomputed from the points and must match the stored one.

        Raises:
            OutputError: for a malformed or inconsistent file
        """
        header: Dict[str, str] = {}
        point_lines: List[str] = []
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith('#'):
                key, _, value = line.lstrip('#').partition(':')
                header[key.strip()] = value.strip()
            else:
                point_lines.append(line)

        missing = [key for key in ORBIT_HEADER_KEYS + ('break_set',) if key not in header]
        if missing:
            raise OutputError(f"pseudo-orbit file lacks header fields: {', '.join(missing)}")
        if header['system'] != s.name:
            raise OutputError(f"pseudo-orbit file is for {header['system']}, expected {s.name}")

        try:
            horizon = int(header['horizon'])
            if horizon != len(point_lines):
                raise OutputError(f"header announces {horizon} points, file has {len(point_lines)}")
            orbit = pseudo_orbit_from_points(
                s,
                [parse_point(s, line) for line in point_lines],
                float(header['delta']),
                kind=OrbitKind(header['kind']),
                seed=int(header['seed']) if header['seed'] else None,
                junctions=IndexSet(horizon, _indices(header['junctions'])),
            )
            stored = _indices(header['break_set'])
        except OutputError:
            raise
        except (ValueError, ShadowLabError) as e:
            raise OutputError(f"malformed pseudo-orbit file: {e}") from e

        if tuple(orbit.break_set) != stored:
            raise OutputError("stored break set does not match the recomputed one")
        return orbit

    def write_pseudo_orbit(self, s: SystemHandle, p: PseudoOrbit, file_path: str) -> str:
        return self.write_text(self.format_pseudo_orbit(s, p), file_path)

    def read_pseudo_orbit(self, s: SystemHandle, file_path: str) -> PseudoOrbit:
        return self.parse_pseudo_orbit(s, self.read_text(file_path))

    # -----------------------------------------------------------------------
    # graphs

    def write_graph(self, s: SystemHandle, g: TransitionGraph, directory: str, stem: str) -> List[str]:
        """Write ``<stem>.nodes.csv`` (node, point) and ``<stem>.edges.csv`` (source, target)."""
        nodes = pd.DataFrame({
            'node': range(len(g.nodes)),
            'point': [format_point(s, point) for point in g.nodes],
        })
        edges = pd.DataFrame(g.edges(), columns=['source', 'target'])
        base = Path(directory)
        return [
            self.write_csv(nodes, str(base / f"{stem}.nodes.csv")),
            self.write_csv(edges, str(base / f"{stem}.edges.csv")),
        ]

    # -----------------------------------------------------------------------
    # batches

    def write_all(self, jobs: Sequence[Callable[[], object]]) -> None:
        """Run independent write jobs on the service's thread pool; the first failure is re-raised."""
        futures = [self._executor.submit(job) for job in jobs]
        errors: Optional[BaseException] = None
        for future in futures:
            exc = future.exception()
            if exc is not None and errors is None:
                errors = exc
        if errors is not None:
            raise errors

    def shutdown(self) -> None:
        self._executor.shutdown(wait=True)


# Initialize service instance
file_service = FileService()
