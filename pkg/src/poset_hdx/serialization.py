"""Reading and writing posets, facet files, reports and operator matrices."""

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .constructors.simplicial import FacetList
from .constructors.weights import propagate_weights, standard_weight_scheme
from .exceptions import FacetParseError, InvalidPosetError
from .models.poset import GradedPoset, WeightScheme
from .models.reports import to_jsonable
from .operators.linear import LinearOp

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
_TOKEN_SPLIT = re.compile(r"[\s,]+")


@dataclass
class PosetDocument:
    """
    A weighted poset as stored on disk.

    ``origin`` records how the poset was built, e.g.
    ``{"kind": "posetification", "q": 2, "facets": [[1, 2, 3]]}``.
    """
    poset: GradedPoset
    weights: WeightScheme
    origin: dict[str, Any] = field(default_factory=dict)

    @property
    def facets(self) -> Optional[FacetList]:
        raw = self.origin.get("facets")
        return FacetList.from_iterable(raw) if raw else None


class PosetSerializer:
    """
    Handles serialization of posets, weight schemes and reports.

    Element ids in Poset JSON are the element handles of the written poset;
    reading re-indexes by ``(rank, label)``, so write(read(x)) == x for any
    file this class produced.
    """

    @staticmethod
    def poset_to_dict(
        poset: GradedPoset, weights: WeightScheme, origin: Optional[dict[str, Any]] = None
    ) -> dict[str, Any]:
        """Convert a weighted poset to the Poset JSON structure."""
        data: dict[str, Any] = {
            "d": poset.d,
            "elements": [
                {"id": x, "rank": poset.rank(x), "label": poset.label(x)} for x in poset.elements
            ],
            "covers": [[child, parent] for child, parent in poset.covers()],
            "m_top": {str(y): float(weights.m[y]) for y in poset.level(poset.d)},
        }
        if not weights.is_standard(poset):
            data["p"] = {
                f"{child},{parent}": float(weights.p[(child, parent)])
                for child, parent in poset.covers()
            }
        if origin:
            data["origin"] = origin
        return data

    @staticmethod
    def dict_to_poset(data: dict[str, Any]) -> PosetDocument:
        """
        Convert a Poset JSON structure back to a weighted poset.

        Raises:
            InvalidPosetError: If required fields are missing or refer to unknown ids.
        """
        if not isinstance(data, dict):
            raise InvalidPosetError(message="Expected a JSON object for a poset")
        for key in ("d", "elements", "covers"):
            if key not in data:
                raise InvalidPosetError(message=f"Missing required field: {key}")
        try:
            ranks = {int(e["id"]): int(e["rank"]) for e in data["elements"]}
            labels = {int(e["id"]): str(e["label"]) for e in data["elements"]}
            covers = [(int(c), int(p)) for c, p in data["covers"]]
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidPosetError(message=f"Malformed element or cover entry: {e}") from e

        poset = GradedPoset.from_covers(ranks, labels, covers, d=int(data["d"]))
        new_id = {old: poset.id_of(label) for old, label in labels.items()}

        top_weights = None
        if "m_top" in data:
            top_weights = {new_id[int(k)]: float(v) for k, v in data["m_top"].items()}
        if "p" in data:
            p = {}
            for key, value in data["p"].items():
                child, parent = (int(part) for part in key.split(","))
                p[(new_id[child], new_id[parent])] = float(value)
            missing = [c for c in poset.covers() if c not in p]
            if missing:
                raise InvalidPosetError(
                    message=f"Transition probabilities missing for {len(missing)} covers",
                    details={"example": [poset.label(x) for x in missing[0]]},
                )
            weights = propagate_weights(poset, p, top_weights)
        else:
            weights = standard_weight_scheme(poset, top_weights)
        return PosetDocument(poset, weights, dict(data.get("origin", {})))

    @staticmethod
    def write_poset(
        path: PathLike,
        poset: GradedPoset,
        weights: WeightScheme,
        origin: Optional[dict[str, Any]] = None,
    ) -> None:
        """Write Poset JSON to ``path``."""
        text = PosetSerializer.dumps(PosetSerializer.poset_to_dict(poset, weights, origin))
        Path(path).write_text(text, encoding="utf-8")
        logger.info(f"Wrote poset with {len(poset)} elements to {path}")

    @staticmethod
    def read_poset(path: PathLike) -> PosetDocument:
        """
        Read Poset JSON from ``path``.

        Raises:
            InvalidPosetError: If the file is not valid Poset JSON.
        """
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise InvalidPosetError(
                message=f"Invalid JSON: {e}", details={"path": str(path)}
            ) from e
        return PosetSerializer.dict_to_poset(data)

    @staticmethod
    def parse_facets(text: str) -> FacetList:
        """
        Parse a facet file: one facet per line, vertices separated by spaces or commas.

        Blank lines and ``#`` comments are ignored.

        Raises:
            FacetParseError: On a non-integer vertex, a repeated vertex or an empty file.
        """
        facets: list[list[int]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                vertices = [int(token) for token in _TOKEN_SPLIT.split(line) if token]
            except ValueError as e:
                raise FacetParseError(
                    message=f"Vertices must be integers: {line!r}", line=number
                ) from e
            if len(set(vertices)) != len(vertices):
                raise FacetParseError(message=f"Repeated vertex in facet {line!r}", line=number)
            facets.append(vertices)
        if not facets:
            raise FacetParseError(message="Facet file contains no facets")
        return FacetList.from_iterable(facets)

    @staticmethod
    def read_facets(path: PathLike) -> FacetList:
        """Read and parse a facet file."""
        return PosetSerializer.parse_facets(Path(path).read_text(encoding="utf-8"))

    @staticmethod
    def dumps(report: Any) -> str:
        """Deterministic JSON text of a report or plain structure."""
        return json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n"

    @staticmethod
    def write_matrix(path: PathLike, op: LinearOp) -> Path:
        """
        Dump an operator as plain-text rows plus a JSON index map next to it.

        Returns:
            Path of the index map (``<path>.index.json``).
        """
        path = Path(path)
        rows = [" ".join(f"{value:.17g}" for value in row) for row in op.matrix]
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        poset = op.poset
        index = {
            "name": op.name,
            "source_level": op.source_level,
            "target_level": op.target_level,
            "rows": [poset.label(x) for x in poset.level(op.target_level)],
            "columns": [poset.label(x) for x in poset.level(op.source_level)],
            "flags": list(op.flags),
        }
        index_path = path.with_name(path.name + ".index.json")
        index_path.write_text(PosetSerializer.dumps(index), encoding="utf-8")
        logger.info(f"Wrote {op.name} ({op.matrix.shape[0]}x{op.matrix.shape[1]}) to {path}")
        return index_path
