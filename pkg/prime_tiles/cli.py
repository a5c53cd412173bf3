import json
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from prime_tiles.constructors.integer_line import prime_size_tiles_z
from prime_tiles.constructors.linear import difference_determinant
from prime_tiles.constructors.simplex import general_position_tiling
from prime_tiles.constructors.spectrum import prime_tile_spectrum
from prime_tiles.errors import (
    InputParseError,
    NoAnnihilatedClass,
    NotConstructed,
    PreconditionError,
)
from prime_tiles.mask_fourier import PointMultiset, class_annihilated, project_multiset
from prime_tiles.pair_verify import (
    SIZE_ERRATUM,
    TilingMethod,
    certificate_from_dict,
    scan_periodic_complement,
    search_spectrum,
    search_tiling_complement,
    verify_spectral,
    verify_tiling,
    verify_tiling_direct,
)
from prime_tiles.selftest import run_all
from prime_tiles.utils import format_point, format_points
from prime_tiles.zn_group import GroupContext, class_of, equivalence_classes

SCHEMA_VERSION = 1

Point = Tuple[int, ...]


class Command(Enum):
    VERIFY_TILING = "verify-tiling"
    VERIFY_SPECTRAL = "verify-spectral"
    CONSTRUCT_SPECTRUM = "construct-spectrum"
    CONSTRUCT_COMPLEMENT = "construct-complement"
    CLASSES = "classes"
    SEARCH_COMPLEMENT = "search-complement"
    SEARCH_SPECTRUM = "search-spectrum"
    CHECK_1D = "check-1d"
    SELFTEST = "selftest"

    @staticmethod
    def valid_types() -> List[str]:
        return [command.value for command in Command]

    @staticmethod
    def is_valid(command: str) -> bool:
        return command in Command.valid_types()

    def needs_group(self) -> bool:
        return self not in (Command.CONSTRUCT_COMPLEMENT, Command.CHECK_1D, Command.SELFTEST)

    def required_sets(self) -> Tuple[str, ...]:
        return {
            Command.VERIFY_TILING: ("A", "B"),
            Command.VERIFY_SPECTRAL: ("A", "S"),
            Command.CONSTRUCT_SPECTRUM: ("A",),
            Command.CONSTRUCT_COMPLEMENT: ("points",),
            Command.SEARCH_COMPLEMENT: ("A",),
            Command.SEARCH_SPECTRUM: ("A",),
            Command.CHECK_1D: ("A",),
        }.get(self, ())


SET_NAMES = ("A", "B", "S", "points", "elements")


@dataclass
class JobSpec:
    command: Command
    n: Optional[int]
    d: int
    sets: Dict[str, List[Point]]
    bound: Optional[int] = None
    search_bound: Optional[int] = None
    output_format: str = "table"
    scan_n: Optional[range] = None
    strict: bool = False
    method: TilingMethod = TilingMethod.BOTH

    @property
    def in_group(self) -> bool:
        """False when the sets are points of Z^d rather than elements of Z_n^d."""
        if self.command == Command.SEARCH_COMPLEMENT and self.scan_n is not None:
            return False
        return self.command.needs_group()

    def context(self) -> GroupContext:
        if self.bound is None:
            return GroupContext(self.n, self.d)
        return GroupContext(self.n, self.d, self.bound)

    def multiset(self, name: str) -> PointMultiset:
        return PointMultiset(self.context(), {x: 1 for x in self.sets[name]})

    def to_dict(self) -> Dict[str, Any]:
        data = {"command": self.command.value, "n": self.n, "d": self.d}
        for name, points in self.sets.items():
            data[name] = [list(x) for x in points]
        if self.command == Command.VERIFY_TILING:
            data["method"] = self.method.value
        return data


def parse_scan_range(text: str) -> range:
    """'A..B' -> range(A, B + 1)."""
    low, sep, high = text.partition("..")
    try:
        low_n, high_n = int(low), int(high)
    except ValueError:
        raise InputParseError(f"expected A..B, got {text!r}", field="scan-n")
    if not sep or low_n < 1 or high_n < low_n:
        raise InputParseError(f"expected A..B with 1 <= A <= B, got {text!r}", field="scan-n")
    return range(low_n, high_n + 1)


def _parse_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputParseError(f"expected an integer, got {value!r}", field=path)
    return value


def _parse_point(value: Any, path: str) -> Point:
    if isinstance(value, list):
        return tuple(_parse_int(c, f"{path}[{i}]") for i, c in enumerate(value))
    return (_parse_int(value, path),)


def _parse_set(name: str, raw: Any, n: Optional[int], d: int, strict: bool) -> List[Point]:
    if not isinstance(raw, list):
        raise InputParseError("expected a list of points", field=name)
    points = []
    for i, value in enumerate(raw):
        path = f"{name}[{i}]"
        point = _parse_point(value, path)
        if len(point) != d:
            raise InputParseError(f"expected {d} coordinates, got {len(point)}", field=path)
        if n is not None and not all(0 <= c < n for c in point):
            if strict:
                raise InputParseError(f"coordinate outside [0, {n})", field=path)
            reduced = tuple(c % n for c in point)
            logging.warning(f"{path}: {format_point(point)} reduced mod {n} to {format_point(reduced)}")
            point = reduced
        points.append(point)
    duplicates = sorted({x for x in points if points.count(x) > 1})
    if duplicates:
        raise InputParseError(f"duplicate points {format_points(duplicates)}", field=name)
    return points


def parse_input(
    text: str,
    command: Optional[str] = None,
    strict: bool = False,
    bound: Optional[int] = None,
    search_bound: Optional[int] = None,
    output_format: str = "table",
    scan_n: Optional[str] = None,
) -> JobSpec:
    """
    Parses a job object: {"n": 3, "d": 2, "A": [[0, 0], [1, 0], [0, 2]], "B": [...]}.

    The command may be given in the object or as an argument (the argument wins). Points
    of dimension one may be plain integers. When d is omitted it is taken from the first
    point. Coordinates of group elements outside [0, n) are reduced with a warning, or
    rejected when strict.

    Raises:
        InputParseError: With the line and column of a syntax error, or the path of the bad field.
    """
    text = text.strip() or "{}"
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputParseError(f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(data, dict):
        raise InputParseError("top level must be an object")

    command = command or data.get("command")
    if command is None:
        raise InputParseError("no command given", field="command")
    if not Command.is_valid(command):
        raise InputParseError(f"unknown command {command!r}, expected one of {Command.valid_types()}", field="command")
    job_command = Command(command)

    method = data.get("method", TilingMethod.BOTH.value)
    if not TilingMethod.is_valid(method):
        raise InputParseError(f"unknown method {method!r}, expected one of {TilingMethod.valid_types()}", field="method")

    job = JobSpec(
        command=job_command,
        n=None,
        d=1,
        sets={},
        bound=bound,
        search_bound=search_bound,
        output_format=output_format,
        scan_n=parse_scan_range(scan_n) if scan_n else None,
        strict=strict,
        method=TilingMethod(method),
    )

    if job.in_group:
        if "n" not in data:
            raise InputParseError(f"{job_command.value} needs the modulus n", field="n")
        job.n = _parse_int(data["n"], "n")
        if job.n < 1:
            raise InputParseError(f"modulus must be >= 1, got {job.n}", field="n")

    present = [name for name in SET_NAMES if name in data]
    if "d" in data:
        job.d = _parse_int(data["d"], "d")
        if job.d < 1:
            raise InputParseError(f"dimension must be >= 1, got {job.d}", field="d")
    elif present and isinstance(data[present[0]], list) and data[present[0]]:
        first = data[present[0]][0]
        job.d = len(first) if isinstance(first, list) else 1
    elif job.in_group:
        raise InputParseError("dimension missing and no point to infer it from", field="d")

    for name in job_command.required_sets():
        if name not in data:
            raise InputParseError(f"{job_command.value} needs the set {name}", field=name)
    for name in present:
        job.sets[name] = _parse_set(name, data[name], job.n if job.in_group else None, job.d, strict)
    for name in job_command.required_sets():
        if not job.sets[name]:
            raise InputParseError(f"{job_command.value} needs a nonempty set", field=name)
    return job


@dataclass
class Report:
    command: str
    input: Dict[str, Any]
    verdict: Optional[bool]
    certificates: List[Dict[str, Any]] = field(default_factory=list)
    constructed: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    seconds: float = 0.0
    exit_code: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "input": self.input,
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "certificates": self.certificates,
            "constructed": self.constructed,
            "timing": {"seconds": round(self.seconds, 6)},
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def render_table(self) -> str:
        verdict = "n/a" if self.verdict is None else str(self.verdict).lower()
        lines = [f"command:  {self.command}", f"verdict:  {verdict} (exit {self.exit_code})"]
        for cert in self.certificates:
            label = cert["kind"] if "method" not in cert else f"{cert['kind']} [{cert['method']}]"
            lines.append(f"  {label} in Z_{cert['n']}^{cert['d']}: {str(cert['verdict']).lower()}")
            if cert.get("witness") is not None:
                lines.append(f"    witness: {format_point(cert['witness'])} ({cert['reason']})")
            elif cert.get("reason"):
                lines.append(f"    reason: {cert['reason']}")
        for key, value in self.constructed.items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"{key}:")
                lines.extend(f"  {entry}" for entry in value)
                continue
            if isinstance(value, list) and value and isinstance(value[0], list):
                value = format_points(value)
            lines.append(f"{key}: {value}")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"time:     {self.seconds:.3f}s")
        return "\n".join(lines)


def _lists(points: Sequence[Sequence[int]]) -> List[List[int]]:
    return [list(x) for x in points]


def _verify_tiling(job: JobSpec, report: Report):
    cert = verify_tiling(job.multiset("A"), job.multiset("B"), job.method)
    if job.method.uses_fourier():
        report.notes.append(SIZE_ERRATUM)
    report.certificates.append(cert.to_dict())
    report.verdict = cert.verdict


def _verify_spectral(job: JobSpec, report: Report):
    cert = verify_spectral(job.multiset("A"), job.sets["S"])
    report.certificates.append(cert.to_dict())
    report.verdict = cert.verdict


def _construct_spectrum(job: JobSpec, report: Report):
    construction = prime_tile_spectrum(job.multiset("A"), job.search_bound)
    report.constructed.update(
        {
            "class": list(construction.chosen_class.canonical),
            "class_order": construction.chosen_class.order,
            "spectrum": _lists(construction.derived),
        }
    )
    report.certificates.append(construction.certificate.to_dict())
    report.verdict = construction.certificate.verdict


def _construct_complement(job: JobSpec, report: Report):
    points = job.sets["points"]
    result = general_position_tiling(points, job.search_bound)
    report.constructed.update(
        {
            "functional_w": list(result.functional_w) if result.functional_w else None,
            "complement_descr": result.complement_descr,
            "modulus": result.modulus,
            "complement": _lists(result.complement),
            "spectrum": _lists(result.spectrum),
            "fallback_used": result.fallback_used,
            "determinant": difference_determinant(points),
        }
    )
    if result.fallback_used:
        report.notes.append(f"no separating functional mod {result.modulus}; complement found by search")
    report.certificates.extend([result.image_pair.to_dict(), result.spectral.to_dict()])
    report.verdict = result.image_pair.verdict and result.spectral.verdict


def _classes(job: JobSpec, report: Report):
    ctx = job.context()
    A = job.multiset("A") if "A" in job.sets else None
    if "elements" in job.sets:
        # no whole-group scan: only the classes of the listed elements
        found = {}
        for x in job.sets["elements"]:
            E = class_of(ctx, x)
            found.setdefault(E.canonical, E)
        selected = sorted(found.values(), key=lambda E: (E.order, E.canonical))
    else:
        selected = equivalence_classes(ctx)
    classes = []
    for E in selected:
        entry = {"canonical": list(E.canonical), "order": E.order, "members": _lists(E.members)}
        if A is not None:
            entry["annihilated"] = class_annihilated(A, E)
        classes.append(entry)
    report.constructed["classes"] = classes
    report.verdict = True


def _search_complement(job: JobSpec, report: Report):
    if job.scan_n is not None:
        found = scan_periodic_complement(job.sets["A"], job.scan_n, job.search_bound)
        if found is None:
            report.notes.append(f"no period in {job.scan_n.start}..{job.scan_n.stop - 1}; inconclusive")
            report.verdict = False
            return
        n, complement = found
        image, _ = project_multiset(job.sets["A"], GroupContext(n, job.d))
        cert = verify_tiling_direct(image, PointMultiset(image.ctx, {b: 1 for b in complement}))
        report.constructed.update({"period": n, "complement": _lists(complement)})
    else:
        A = job.multiset("A")
        complement = search_tiling_complement(A, job.search_bound)
        if complement is None:
            report.notes.append(f"{format_points(A.support)} does not tile Z_{job.n}^{job.d}")
            report.verdict = False
            return
        cert = verify_tiling_direct(A, PointMultiset(A.ctx, {b: 1 for b in complement}))
        report.constructed["complement"] = _lists(complement)
    report.certificates.append(cert.to_dict())
    report.verdict = cert.verdict


def _search_spectrum(job: JobSpec, report: Report):
    A = job.multiset("A")
    spectrum = search_spectrum(A, job.search_bound)
    if spectrum is None:
        report.notes.append(f"{format_points(A.support)} has no spectrum in Z_{job.n}^{job.d}")
        report.verdict = False
        return
    cert = verify_spectral(A, spectrum)
    report.constructed["spectrum"] = _lists(spectrum)
    report.certificates.append(cert.to_dict())
    report.verdict = cert.verdict


def _check_1d(job: JobSpec, report: Report):
    if job.d != 1:
        raise PreconditionError(f"check-1d works on integers, got dimension {job.d}")
    integers = [x[0] for x in job.sets["A"]]
    decision = prime_size_tiles_z(integers, len(integers))
    report.constructed["decision"] = "tiles" if decision.tiles else "non_tile"
    if decision.tiles:
        report.constructed.update({"k": decision.k, "complement_recipe": decision.complement_recipe})
        report.certificates.append(decision.window.to_dict())
    report.verdict = decision.tiles


def _selftest(job: JobSpec, report: Report):
    results = run_all()
    report.constructed["criteria"] = [r.to_dict() for r in results]
    report.verdict = all(r.passed for r in results)


HANDLERS = {
    Command.VERIFY_TILING: _verify_tiling,
    Command.VERIFY_SPECTRAL: _verify_spectral,
    Command.CONSTRUCT_SPECTRUM: _construct_spectrum,
    Command.CONSTRUCT_COMPLEMENT: _construct_complement,
    Command.CLASSES: _classes,
    Command.SEARCH_COMPLEMENT: _search_complement,
    Command.SEARCH_SPECTRUM: _search_spectrum,
    Command.CHECK_1D: _check_1d,
    Command.SELFTEST: _selftest,
}


def run(job: JobSpec) -> Report:
    """
    Dispatches the job and collects its certificates.

    Exit code 0 for a true verdict or a successful construction, 1 for a false verdict or
    a construction that was not possible, 2 for bad input including exceeded bounds.
    """
    report = Report(job.command.value, job.to_dict(), None)
    start = time.perf_counter()
    try:
        HANDLERS[job.command](job, report)
        report.exit_code = 0 if report.verdict else 1
    except NoAnnihilatedClass as e:
        report.verdict = False
        report.constructed["is_tile"] = e.is_tile
        report.notes.append(str(e))
        report.exit_code = 1
    except NotConstructed as e:
        report.verdict = False
        report.notes.append(str(e))
        report.exit_code = 1
    except PreconditionError as e:
        logging.error(f"{job.command.value}: {e}")
        report.notes.append(str(e))
        report.exit_code = 2
    report.seconds = time.perf_counter() - start
    return report


def recheck_report(data: Dict[str, Any]) -> bool:
    """Re-verifies every certificate embedded in a machine report."""
    if data.get("schema") != SCHEMA_VERSION:
        raise InputParseError(f"unsupported schema {data.get('schema')!r}", field="schema")
    return all(certificate_from_dict(cert).recheck() for cert in data.get("certificates", []))
