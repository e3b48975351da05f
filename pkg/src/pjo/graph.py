"""Journey graph storage, mutation operations, and the invariant checker.

The graph holds patients, providers, intake forms, encounters, ownership
maps, and typed journey edges.  Mutation methods (``add_patient``,
``add_encounter``, ``link``, ...) reject violations by raising;
``check_invariants`` re-checks a whole graph and reports every violation as
a diagnostic instead, so damaged graphs can be inspected rather than merely
refused.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .codes import CLASS_ANNOTATIONS, AnnotationTable, CodeSystem, duplicate_cuis
from .errors import (
    CrossPatientLinkError,
    CycleIntroducedError,
    DuplicateEdgeError,
    DuplicateIDError,
    FieldInvalidError,
    TemporalViolationError,
    UnknownEncounterError,
    UnknownPatientError,
    UnknownProviderError,
)
from .records import (
    Encounter,
    EdgeKind,
    IntakeForm,
    JourneyEdge,
    Patient,
    Provider,
    edge_dates_consistent,
    vital_sign_problems,
)


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    location: str


@dataclass
class ValidationReport:
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.ERROR]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.WARNING]

    @property
    def ok(self) -> bool:
        """A graph is valid exactly when the report carries no errors."""
        return not self.errors


# Diagnostic codes.  The first block are errors, the second warnings.
BAD_CUI = "bad-cui"
BAD_FHIR_LABEL = "bad-fhir-label"
BAD_ICD10 = "bad-icd10"
CROSS_PATIENT_LINK = "cross-patient-link"
CYCLE = "cycle"
DANGLING_REFERENCE = "dangling-reference"
DUPLICATE_EDGE = "duplicate-edge"
DUPLICATE_ID = "duplicate-id"
FIELD_INVALID = "field-invalid"
MISSING_FIELD = "missing-field"
SELF_LINK = "self-link"
SYNTAX_ERROR = "syntax-error"
TEMPORAL_VIOLATION = "temporal-violation"
UNKNOWN_PATIENT = "unknown-patient"
UNKNOWN_PROVIDER = "unknown-provider"
UNOWNED_ENCOUNTER = "unowned-encounter"
UNOWNED_INTAKE_FORM = "unowned-intake-form"
UNSUPPORTED_FORMAT_VERSION = "unsupported-format-version"
INVALID_TYPE = "invalid-type"
INVALID_VALUE = "invalid-value"
REFERENCE_ERROR = "reference-error"

DUPLICATE_CUI_ANNOTATION = "duplicate-cui-annotation"
JOURNEY_GAP = "journey-gap"
UNKNOWN_FIELD = "unknown-field"
UNRESOLVED_VIA = "unresolved-via"


FieldProblem = tuple[str, str, str]  # (relative location, code, message)


def patient_problems(patient: Patient) -> list[FieldProblem]:
    problems: list[FieldProblem] = []
    if not patient.patient_id:
        problems.append(("patientID", FIELD_INVALID, "patientID must be nonempty"))
    if not patient.patient_name:
        problems.append(("patientName", FIELD_INVALID, "patientName must be nonempty"))
    return problems


def provider_problems(provider: Provider) -> list[FieldProblem]:
    problems: list[FieldProblem] = []
    if not provider.provider_id:
        problems.append(("providerID", FIELD_INVALID, "providerID must be nonempty"))
    if not provider.provider_name:
        problems.append(("providerName", FIELD_INVALID, "providerName must be nonempty"))
    years = provider.years_of_experience
    if years is not None and years < 0:
        problems.append(
            ("yearsOfExperience", FIELD_INVALID, f"yearsOfExperience must be >= 0, got {years}")
        )
    return problems


def intake_form_problems(form: IntakeForm) -> list[FieldProblem]:
    problems: list[FieldProblem] = []
    if not form.intake_form_id:
        problems.append(("intakeFormID", FIELD_INVALID, "intakeFormID must be nonempty"))
    history = form.medical_history
    for key, entries in (
        ("hadSurgery", history.had_surgery),
        ("chronicIllness", history.chronic_illness),
        ("medicationAllergies", history.medication_allergies),
        ("familyMedicalHistory", history.family_medical_history),
    ):
        for index, entry in enumerate(entries):
            if not entry:
                problems.append(
                    (
                        f"medicalHistory.{key}[{index}]",
                        FIELD_INVALID,
                        f"{key} entries must be nonempty",
                    )
                )
    social = form.social_history
    if not social.smoking_habit:
        problems.append(
            ("socialHistory.smokingHabit", FIELD_INVALID, "smokingHabit must be nonempty")
        )
    if not social.drinking_habit:
        problems.append(
            ("socialHistory.drinkingHabit", FIELD_INVALID, "drinkingHabit must be nonempty")
        )
    return problems


def encounter_problems(encounter: Encounter) -> list[FieldProblem]:
    """Field-level problems, with locations relative to the encounter."""
    problems: list[FieldProblem] = []
    if not encounter.encounter_id:
        problems.append(("encounterID", FIELD_INVALID, "encounterID must be nonempty"))
    if not encounter.specialty:
        problems.append(("specialty", FIELD_INVALID, "specialty must be nonempty"))
    if not encounter.provider_ref:
        problems.append(("providerRef", FIELD_INVALID, "providerRef must be nonempty"))
    for index, symptom in enumerate(encounter.symptoms):
        if not symptom.symptom_name:
            problems.append(
                (f"symptoms[{index}].symptomName", FIELD_INVALID, "symptomName must be nonempty")
            )
    for index, vital in enumerate(encounter.vitals):
        for field_name, message in vital_sign_problems(vital):
            problems.append((f"vitals[{index}].{field_name}", FIELD_INVALID, message))
    for index, test in enumerate(encounter.tests):
        if not test.test_name:
            problems.append(
                (f"tests[{index}].testName", FIELD_INVALID, "testName must be nonempty")
            )
    for index, diagnosis in enumerate(encounter.diagnoses):
        if not diagnosis.diagnosis_name:
            problems.append(
                (
                    f"diagnoses[{index}].diagnosisName",
                    FIELD_INVALID,
                    "diagnosisName must be nonempty",
                )
            )
        code = diagnosis.icd10
        if code is not None and not code.is_valid():
            problems.append(
                (
                    f"diagnoses[{index}].icd10",
                    BAD_ICD10,
                    f"{code.code!r} is not a valid {code.system.value} code",
                )
            )
    for index, medication in enumerate(encounter.medications):
        if not medication.medication_name:
            problems.append(
                (
                    f"medications[{index}].medicationName",
                    FIELD_INVALID,
                    "medicationName must be nonempty",
                )
            )
    for index, plan in enumerate(encounter.care_plans):
        if not plan.plan_id:
            problems.append(
                (f"carePlans[{index}].planID", FIELD_INVALID, "planID must be nonempty")
            )
    return problems


def via_resolves(via: str, from_encounter: Encounter, to_encounter: Encounter) -> bool:
    """Whether ``via`` names a care plan or diagnosis in either endpoint."""
    for encounter in (from_encounter, to_encounter):
        if any(plan.plan_id == via for plan in encounter.care_plans):
            return True
        if any(diagnosis.diagnosis_name == via for diagnosis in encounter.diagnoses):
            return True
    return False


def oriented_edges(edges: list[JourneyEdge]) -> list[tuple[str, str]]:
    """Edges oriented forward in journey time: cause/predecessor first."""
    oriented = []
    for edge in edges:
        if edge.kind is EdgeKind.CAUSED_BY:
            oriented.append((edge.to_encounter, edge.from_encounter))
        else:
            oriented.append((edge.from_encounter, edge.to_encounter))
    return oriented


def cyclic_nodes(nodes: list[str], arcs: list[tuple[str, str]]) -> list[str]:
    """Nodes on or downstream of a directed cycle, by Kahn's algorithm.

    Empty exactly when the arc set is acyclic.  Only arcs whose endpoints
    both appear in ``nodes`` are considered.
    """
    known = set(nodes)
    out: dict[str, list[str]] = {node: [] for node in nodes}
    indegree = {node: 0 for node in nodes}
    for source, target in arcs:
        if source in known and target in known:
            out[source].append(target)
            indegree[target] += 1
    ready = [node for node in nodes if indegree[node] == 0]
    removed = 0
    while ready:
        node = ready.pop()
        removed += 1
        for target in out[node]:
            indegree[target] -= 1
            if indegree[target] == 0:
                ready.append(target)
    return sorted(node for node in nodes if indegree[node] > 0)


@dataclass
class JourneyGraph:
    """One store of patients, their intake forms, encounters, and links.

    ``encounter_owner`` and ``intake_form_owner`` map record IDs to the
    owning patient ID; together they realize the ownership relations.  The
    graph also carries the class annotation table it is checked against,
    defaulting to the canonical one.
    """

    patients: dict[str, Patient] = field(default_factory=dict)
    providers: dict[str, Provider] = field(default_factory=dict)
    intake_forms: dict[str, IntakeForm] = field(default_factory=dict)
    encounters: dict[str, Encounter] = field(default_factory=dict)
    encounter_owner: dict[str, str] = field(default_factory=dict)
    intake_form_owner: dict[str, str] = field(default_factory=dict)
    edges: list[JourneyEdge] = field(default_factory=list)
    annotations: AnnotationTable = field(default_factory=lambda: dict(CLASS_ANNOTATIONS))

    # -- mutation ---------------------------------------------------------

    def add_patient(self, patient: Patient) -> None:
        problems = patient_problems(patient)
        if problems:
            raise FieldInvalidError(problems[0][2])
        if patient.patient_id in self.patients:
            raise DuplicateIDError(f"patient ID {patient.patient_id!r} already exists")
        self.patients[patient.patient_id] = patient

    def add_provider(self, provider: Provider) -> None:
        problems = provider_problems(provider)
        if problems:
            raise FieldInvalidError(problems[0][2])
        if provider.provider_id in self.providers:
            raise DuplicateIDError(f"provider ID {provider.provider_id!r} already exists")
        self.providers[provider.provider_id] = provider

    def add_intake_form(self, patient_id: str, form: IntakeForm) -> None:
        if patient_id not in self.patients:
            raise UnknownPatientError(f"unknown patient {patient_id!r}")
        problems = intake_form_problems(form)
        if problems:
            raise FieldInvalidError(f"{problems[0][0]}: {problems[0][2]}")
        if form.intake_form_id in self.intake_forms:
            raise DuplicateIDError(f"intake form ID {form.intake_form_id!r} already exists")
        if patient_id in self.intake_form_owner.values():
            raise DuplicateIDError(f"patient {patient_id!r} already has an intake form")
        self.intake_forms[form.intake_form_id] = form
        self.intake_form_owner[form.intake_form_id] = patient_id

    def add_encounter(self, patient_id: str, encounter: Encounter) -> None:
        patient = self.patients.get(patient_id)
        if patient is None:
            raise UnknownPatientError(f"unknown patient {patient_id!r}")
        problems = encounter_problems(encounter)
        if problems:
            raise FieldInvalidError(f"{problems[0][0]}: {problems[0][2]}")
        if encounter.encounter_id in self.encounters:
            raise DuplicateIDError(f"encounter ID {encounter.encounter_id!r} already exists")
        if encounter.provider_ref not in self.providers:
            raise UnknownProviderError(f"unknown provider {encounter.provider_ref!r}")
        if encounter.date < patient.birth_date:
            raise FieldInvalidError(
                f"encounter date {encounter.date.isoformat()} precedes "
                f"birth date {patient.birth_date.isoformat()}"
            )
        self.encounters[encounter.encounter_id] = encounter
        self.encounter_owner[encounter.encounter_id] = patient_id

    def link(
        self,
        kind: EdgeKind,
        from_encounter: str,
        to_encounter: str,
        via: str | None = None,
    ) -> JourneyEdge:
        source = self.encounters.get(from_encounter)
        target = self.encounters.get(to_encounter)
        if source is None:
            raise UnknownEncounterError(f"unknown encounter {from_encounter!r}")
        if target is None:
            raise UnknownEncounterError(f"unknown encounter {to_encounter!r}")
        if from_encounter == to_encounter:
            raise FieldInvalidError(f"link cannot connect {from_encounter!r} to itself")
        if self.encounter_owner[from_encounter] != self.encounter_owner[to_encounter]:
            raise CrossPatientLinkError(
                f"{from_encounter!r} and {to_encounter!r} belong to different patients"
            )
        if not edge_dates_consistent(kind, source.date, target.date):
            raise TemporalViolationError(
                f"{kind.value} link {from_encounter!r} -> {to_encounter!r} contradicts "
                f"encounter dates {source.date.isoformat()} and {target.date.isoformat()}"
            )
        if any(
            e.kind is kind and e.from_encounter == from_encounter and e.to_encounter == to_encounter
            for e in self.edges
        ):
            raise DuplicateEdgeError(
                f"duplicate {kind.value} link {from_encounter!r} -> {to_encounter!r}"
            )
        edge = JourneyEdge(kind, from_encounter, to_encounter, via)
        self.edges.append(edge)
        in_cycle = cyclic_nodes(list(self.encounters), oriented_edges(self.edges))
        if in_cycle:
            self.edges.pop()
            raise CycleIntroducedError(
                f"{kind.value} link {from_encounter!r} -> {to_encounter!r} introduces a cycle"
            )
        return edge

    # -- lookup -----------------------------------------------------------

    def encounters_of(self, patient_id: str) -> list[Encounter]:
        """The patient's encounters ordered by (date, encounter ID)."""
        if patient_id not in self.patients:
            raise UnknownPatientError(f"unknown patient {patient_id!r}")
        owned = [
            encounter
            for encounter in self.encounters.values()
            if self.encounter_owner.get(encounter.encounter_id) == patient_id
        ]
        return sorted(owned, key=lambda e: (e.date, e.encounter_id))

    def intake_form_of(self, patient_id: str) -> IntakeForm | None:
        if patient_id not in self.patients:
            raise UnknownPatientError(f"unknown patient {patient_id!r}")
        for form_id, owner in self.intake_form_owner.items():
            if owner == patient_id and form_id in self.intake_forms:
                return self.intake_forms[form_id]
        return None

    def patient_of(self, encounter_id: str) -> str:
        if encounter_id not in self.encounters:
            raise UnknownEncounterError(f"unknown encounter {encounter_id!r}")
        return self.encounter_owner[encounter_id]

    def edges_of(self, patient_id: str) -> list[JourneyEdge]:
        """Edges whose endpoints are both owned by the patient."""
        if patient_id not in self.patients:
            raise UnknownPatientError(f"unknown patient {patient_id!r}")
        return [
            edge
            for edge in self.edges
            if self.encounter_owner.get(edge.from_encounter) == patient_id
            and self.encounter_owner.get(edge.to_encounter) == patient_id
        ]

    # -- validation -------------------------------------------------------

    def check_invariants(self) -> ValidationReport:
        """Check every stored record and link; never raises, never mutates.

        The report lists one diagnostic per violated invariant, in a
        deterministic order; a report without errors marks a valid graph.
        """
        report = ValidationReport()

        def error(code: str, message: str, location: str) -> None:
            report.diagnostics.append(Diagnostic(Severity.ERROR, code, message, location))

        def warning(code: str, message: str, location: str) -> None:
            report.diagnostics.append(Diagnostic(Severity.WARNING, code, message, location))

        self._check_annotations(error, warning)
        for patient_id in sorted(self.patients):
            for relative, code, message in patient_problems(self.patients[patient_id]):
                error(code, message, f"patients[{patient_id}].{relative}")
        for provider_id in sorted(self.providers):
            for relative, code, message in provider_problems(self.providers[provider_id]):
                error(code, message, f"providers[{provider_id}].{relative}")
        self._check_intake_forms(error)
        self._check_encounters(error)
        self._check_edges(error, warning)
        self._check_gaps(warning)
        return report

    def _check_annotations(self, error, warning) -> None:
        for class_name in sorted(self.annotations):
            for code in self.annotations[class_name]:
                if code.is_valid():
                    continue
                by_system = {
                    CodeSystem.UMLS_CUI: BAD_CUI,
                    CodeSystem.ICD10: BAD_ICD10,
                    CodeSystem.FHIR_LABEL: BAD_FHIR_LABEL,
                }
                error(
                    by_system[code.system],
                    f"{code.code!r} is not a valid {code.system.value} code",
                    f"annotations[{class_name}]",
                )
        for cui, class_names in sorted(duplicate_cuis(self.annotations).items()):
            warning(
                DUPLICATE_CUI_ANNOTATION,
                f"duplicate CUI annotation: {cui} annotates {' and '.join(class_names)}",
                "annotations",
            )

    def _check_intake_forms(self, error) -> None:
        owners_seen: dict[str, str] = {}
        for form_id in sorted(self.intake_forms):
            location = f"intakeForms[{form_id}]"
            for relative, code, message in intake_form_problems(self.intake_forms[form_id]):
                error(code, message, f"{location}.{relative}")
            owner = self.intake_form_owner.get(form_id)
            if owner is None:
                error(UNOWNED_INTAKE_FORM, f"intake form {form_id!r} has no owner", location)
            elif owner not in self.patients:
                error(UNKNOWN_PATIENT, f"intake form {form_id!r} owned by unknown patient {owner!r}", location)
            elif owner in owners_seen:
                error(
                    FIELD_INVALID,
                    f"patient {owner!r} has multiple intake forms "
                    f"({owners_seen[owner]!r} and {form_id!r})",
                    f"patients[{owner}]",
                )
            else:
                owners_seen[owner] = form_id
        for form_id, owner in sorted(self.intake_form_owner.items()):
            if form_id not in self.intake_forms:
                error(
                    DANGLING_REFERENCE,
                    f"ownership entry references missing intake form {form_id!r}",
                    f"intakeForms[{form_id}]",
                )

    def _check_encounters(self, error) -> None:
        for encounter_id in sorted(self.encounters):
            encounter = self.encounters[encounter_id]
            location = f"encounters[{encounter_id}]"
            for relative, code, message in encounter_problems(encounter):
                error(code, message, f"{location}.{relative}")
            if encounter.provider_ref and encounter.provider_ref not in self.providers:
                error(
                    UNKNOWN_PROVIDER,
                    f"providerRef {encounter.provider_ref!r} does not resolve",
                    f"{location}.providerRef",
                )
            owner = self.encounter_owner.get(encounter_id)
            if owner is None:
                error(UNOWNED_ENCOUNTER, f"encounter {encounter_id!r} has no owner", location)
            elif owner not in self.patients:
                error(
                    UNKNOWN_PATIENT,
                    f"encounter {encounter_id!r} owned by unknown patient {owner!r}",
                    location,
                )
            else:
                birth = self.patients[owner].birth_date
                if encounter.date < birth:
                    error(
                        FIELD_INVALID,
                        f"encounter date {encounter.date.isoformat()} precedes "
                        f"birth date {birth.isoformat()} of patient {owner!r}",
                        f"{location}.date",
                    )
        for encounter_id, owner in sorted(self.encounter_owner.items()):
            if encounter_id not in self.encounters:
                error(
                    DANGLING_REFERENCE,
                    f"ownership entry references missing encounter {encounter_id!r}",
                    f"encounters[{encounter_id}]",
                )

    def _check_edges(self, error, warning) -> None:
        seen: set[tuple[EdgeKind, str, str]] = set()
        for index, edge in enumerate(self.edges):
            location = f"links[{index}]"
            source = self.encounters.get(edge.from_encounter)
            target = self.encounters.get(edge.to_encounter)
            if source is None:
                error(
                    DANGLING_REFERENCE,
                    f"link references missing encounter {edge.from_encounter!r}",
                    location,
                )
            if target is None:
                error(
                    DANGLING_REFERENCE,
                    f"link references missing encounter {edge.to_encounter!r}",
                    location,
                )
            if source is None or target is None:
                continue
            if edge.from_encounter == edge.to_encounter:
                error(
                    SELF_LINK,
                    f"link connects {edge.from_encounter!r} to itself",
                    location,
                )
                continue
            from_owner = self.encounter_owner.get(edge.from_encounter)
            to_owner = self.encounter_owner.get(edge.to_encounter)
            if from_owner != to_owner or from_owner is None:
                error(
                    CROSS_PATIENT_LINK,
                    f"{edge.kind.value} link {edge.from_encounter!r} -> "
                    f"{edge.to_encounter!r} crosses patients",
                    location,
                )
            if not edge_dates_consistent(edge.kind, source.date, target.date):
                error(
                    TEMPORAL_VIOLATION,
                    f"{edge.kind.value} link {edge.from_encounter!r} -> {edge.to_encounter!r} "
                    f"contradicts encounter dates {source.date.isoformat()} "
                    f"and {target.date.isoformat()}",
                    location,
                )
            key = (edge.kind, edge.from_encounter, edge.to_encounter)
            if key in seen:
                error(
                    DUPLICATE_EDGE,
                    f"duplicate {edge.kind.value} link {edge.from_encounter!r} -> "
                    f"{edge.to_encounter!r}",
                    location,
                )
            seen.add(key)
            if edge.via is not None and not via_resolves(edge.via, source, target):
                warning(
                    UNRESOLVED_VIA,
                    f"via {edge.via!r} names no care plan or diagnosis in either endpoint",
                    f"{location}.via",
                )
        in_cycle = cyclic_nodes(list(self.encounters), oriented_edges(self.edges))
        if in_cycle:
            error(
                CYCLE,
                "journey links form a cycle through: " + ", ".join(in_cycle),
                "links",
            )

    def _check_gaps(self, warning) -> None:
        connected: set[frozenset[str]] = set()
        for edge in self.edges:
            connected.add(frozenset((edge.from_encounter, edge.to_encounter)))
        for patient_id in sorted(self.patients):
            owned = [
                e
                for e in self.encounters.values()
                if self.encounter_owner.get(e.encounter_id) == patient_id
            ]
            owned.sort(key=lambda e: (e.date, e.encounter_id))
            for earlier, later in zip(owned, owned[1:]):
                pair = frozenset((earlier.encounter_id, later.encounter_id))
                if pair not in connected:
                    warning(
                        JOURNEY_GAP,
                        f"journey gap: no link between {earlier.encounter_id!r} "
                        f"({earlier.date.isoformat()}) and {later.encounter_id!r} "
                        f"({later.date.isoformat()})",
                        f"patients[{patient_id}]",
                    )


def structurally_equal(left: JourneyGraph, right: JourneyGraph) -> bool:
    """Equality up to storage order: keyed records compared by ID, edges as sets."""

    def edge_key(edge: JourneyEdge):
        return (edge.kind.value, edge.from_encounter, edge.to_encounter, edge.via or "")

    return (
        left.patients == right.patients
        and left.providers == right.providers
        and left.intake_forms == right.intake_forms
        and left.encounters == right.encounters
        and left.encounter_owner == right.encounter_owner
        and left.intake_form_owner == right.intake_form_owner
        and sorted(left.edges, key=edge_key) == sorted(right.edges, key=edge_key)
        and left.annotations == right.annotations
    )
