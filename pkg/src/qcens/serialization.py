"""File formats: test cases, populations, evolution configs, result tables.

All formats are plain text (JSON / JSON-lines / CSV) and deterministic:
serializing the same objects twice yields byte-identical files.  Floats are
written with full round-trip precision.  See FORMATS.md at the repository
root for the complete reference.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

from .circuits import Circuit, CXGate, Gate, UGate
from .ensemble import Ensemble, FitnessReport, TestCase
from .errors import ParseError, ValidationError
from .evolution import EvolutionConfig, Population

POPULATION_FORMAT = "qcens-population-v1"


# --- gates and circuits ---

def gate_to_obj(gate: Gate) -> dict:
    if isinstance(gate, UGate):
        return {"gate": "u", "target": gate.target,
                "theta": gate.theta, "phi": gate.phi, "lambda": gate.lam}
    if isinstance(gate, CXGate):
        return {"gate": "cx", "control": gate.control, "target": gate.target}
    raise ValidationError(f"unknown gate type: {type(gate).__name__}")


def gate_from_obj(obj: dict) -> Gate:
    kind = obj.get("gate")
    if kind == "u":
        return UGate(int(obj["target"]), float(obj["theta"]),
                     float(obj["phi"]), float(obj["lambda"]))
    if kind == "cx":
        return CXGate(int(obj["control"]), int(obj["target"]))
    raise ParseError(f"unknown gate record: {obj!r}")


def circuit_to_obj(circuit: Circuit) -> dict:
    return {
        "num_qubits": circuit.num_qubits,
        "measured_qubits": list(circuit.measured_qubits),
        "gates": [gate_to_obj(g) for g in circuit.gates],
    }


def circuit_from_obj(obj: dict) -> Circuit:
    return Circuit(
        int(obj["num_qubits"]),
        tuple(gate_from_obj(g) for g in obj["gates"]),
        tuple(int(q) for q in obj["measured_qubits"]),
    )


# --- test-case files (JSON lines) ---

def test_case_to_obj(case: TestCase) -> dict:
    obj: dict = {"expected": case.expected}
    if case.features is not None:
        obj["features"] = list(case.features)
    else:
        obj["init_gates"] = [gate_to_obj(g) for g in case.init_gates]
    return obj


def test_case_from_obj(obj: dict) -> TestCase:
    if "features" in obj:
        return TestCase(expected=int(obj["expected"]),
                        features=tuple(float(f) for f in obj["features"]))
    return TestCase(expected=int(obj["expected"]),
                    init_gates=tuple(gate_from_obj(g) for g in obj["init_gates"]))


def write_test_cases(cases, path) -> None:
    with Path(path).open("w") as handle:
        for case in cases:
            handle.write(_dumps(test_case_to_obj(case)) + "\n")


def read_test_cases(path) -> list[TestCase]:
    path = Path(path)
    cases = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: invalid JSON: {exc}") from None
        try:
            cases.append(test_case_from_obj(obj))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}:{lineno}: bad test-case record: {exc}") from None
    if not cases:
        raise ParseError(f"{path}: no test cases")
    return cases


# --- evolution configs (JSON) ---

def config_to_obj(config: EvolutionConfig) -> dict:
    return {
        "num_qubits": config.num_qubits,
        "measured_qubits": list(config.measured_qubits),
        "population_size": config.population_size,
        "generations": config.generations,
        "ensemble_size": config.ensemble_size,
        "gate_cap": config.gate_cap,
        "crossover_rate": config.crossover_rate,
        "mutation_rate": config.mutation_rate,
        "tournament_size": config.tournament_size,
        "elite_fraction": config.elite_fraction,
        "angle_sigma": config.angle_sigma,
        "seed": config.seed,
        "eval_mode": "exact" if config.shots is None else f"shots:{config.shots}",
    }


def config_from_obj(obj: dict) -> EvolutionConfig:
    obj = dict(obj)
    mode = obj.pop("eval_mode", "exact")
    obj["shots"] = parse_eval_mode(mode)
    obj["measured_qubits"] = tuple(obj.get("measured_qubits", (0, 1)))
    try:
        return EvolutionConfig(**obj)
    except TypeError as exc:
        raise ParseError(f"bad config field: {exc}") from None


def parse_eval_mode(mode: str) -> int | None:
    """'exact' -> None; 'shots:<count>' -> count."""
    if mode == "exact":
        return None
    if mode.startswith("shots:"):
        try:
            return int(mode.split(":", 1)[1])
        except ValueError:
            pass
    raise ParseError(f"eval mode must be 'exact' or 'shots:<count>', got {mode!r}")


def write_config(config: EvolutionConfig, path) -> None:
    Path(path).write_text(_dumps(config_to_obj(config), indent=2) + "\n")


def read_config(path) -> EvolutionConfig:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return config_from_obj(obj)


# --- population files (JSON) ---

def population_to_obj(population: Population) -> dict:
    obj = {
        "format": POPULATION_FORMAT,
        "generation": population.generation,
        "ensembles": [
            [circuit_to_obj(c) for c in e.circuits] for e in population.individuals
        ],
        "fitnesses": [
            {"fitness": r.fitness, "per_test": list(r.per_test)}
            for r in population.fitnesses
        ],
    }
    if population.config is not None:
        obj["config"] = config_to_obj(population.config)
    return obj


def population_from_obj(obj: dict) -> Population:
    if obj.get("format") != POPULATION_FORMAT:
        raise ParseError(f"not a population file (format={obj.get('format')!r})")
    individuals = tuple(
        Ensemble(tuple(circuit_from_obj(c) for c in members))
        for members in obj["ensembles"]
    )
    fitnesses = tuple(
        FitnessReport(float(r["fitness"]), tuple(float(p) for p in r["per_test"]))
        for r in obj["fitnesses"]
    )
    config = config_from_obj(obj["config"]) if "config" in obj else None
    return Population(individuals, fitnesses, int(obj["generation"]), config)


def write_population(population: Population, path) -> None:
    Path(path).write_text(_dumps(population_to_obj(population)) + "\n")


def read_population(path) -> Population:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return population_from_obj(obj)


# --- result rows (CSV + aligned text table) ---

@dataclass(frozen=True)
class ResultRow:
    """One backend/ensemble-size comparison: medians, p-value, effect size."""

    backend_name: str
    ensemble_size: int
    median_het: float
    median_hom: float
    p_value: float
    effect_r: float


RESULT_FIELDS = ("backend", "n", "median_het", "median_hom", "p_value", "effect_r")


def result_rows_to_csv(rows) -> str:
    rows = list(rows)
    if not rows:
        raise ValidationError("no result rows to write")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RESULT_FIELDS)
    for row in rows:
        writer.writerow([
            row.backend_name, row.ensemble_size,
            repr(row.median_het), repr(row.median_hom),
            repr(row.p_value), repr(row.effect_r),
        ])
    return out.getvalue()


def result_rows_from_csv(text: str) -> list[ResultRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != list(RESULT_FIELDS):
        raise ParseError(f"bad result-file header: {header!r}")
    rows = []
    for record in reader:
        if not record:
            continue
        if len(record) != len(RESULT_FIELDS):
            raise ParseError(f"bad result row: {record!r}")
        rows.append(ResultRow(
            backend_name=record[0], ensemble_size=int(record[1]),
            median_het=float(record[2]), median_hom=float(record[3]),
            p_value=float(record[4]), effect_r=float(record[5]),
        ))
    if not rows:
        raise ParseError("result file has no rows")
    return rows


def result_table_text(rows) -> str:
    """Aligned text table, one line per backend, columns grouped by n."""
    rows = list(rows)
    if not rows:
        raise ValidationError("no result rows to format")
    sizes = sorted({r.ensemble_size for r in rows})
    backends: list[str] = []
    for row in rows:
        if row.backend_name not in backends:
            backends.append(row.backend_name)
    by_key = {(r.backend_name, r.ensemble_size): r for r in rows}
    header = ["backend"]
    for n in sizes:
        header += [f"het(n={n})", f"hom(n={n})", f"p(n={n})", f"r(n={n})"]
    lines = [header]
    for backend in backends:
        line = [backend]
        for n in sizes:
            row = by_key.get((backend, n))
            if row is None:
                line += ["-"] * 4
            else:
                line += [f"{row.median_het:.3f}", f"{row.median_hom:.3f}",
                         f"{row.p_value:.3g}", f"{row.effect_r:+.3f}"]
        lines.append(line)
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return "\n".join(
        "  ".join(cell.rjust(w) for cell, w in zip(line, widths)) for line in lines
    ) + "\n"


def _dumps(obj, indent: int | None = None) -> str:
    return json.dumps(obj, sort_keys=True, indent=indent,
                      separators=(",", ": ") if indent else (",", ":"))
