from datetime import date

import pytest
from hypothesis import HealthCheck, settings

from pjo import (
    CarePlan,
    CodeSystem,
    ConceptCode,
    DiagTest,
    Diagnosis,
    Encounter,
    IntakeForm,
    JourneyGraph,
    MedicalHistory,
    Medication,
    Patient,
    Provider,
    SocialHistory,
    Symptom,
    VitalSign,
    john_doe_bundle,
    john_doe_graph,
)

settings.register_profile(
    "pjo",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pjo")


@pytest.fixture
def john_graph() -> JourneyGraph:
    return john_doe_graph()


@pytest.fixture
def john_text() -> str:
    return john_doe_bundle()


def build_encounter_one_graph() -> JourneyGraph:
    """One patient, one intake form, one fully populated encounter.

    Every subrecord class appears exactly once except Symptom, which
    appears twice, so instance numbering is observable in exports.
    """
    graph = JourneyGraph()
    graph.add_patient(
        Patient(
            patient_id="Patient-1",
            patient_name="Jane Roe",
            birth_date=date(1985, 2, 11),
            race="White",
            gender="Female",
        )
    )
    graph.add_provider(
        Provider(
            provider_id="Provider-1",
            provider_name="Dr. Alice Carter",
            specialization="General Medicine",
        )
    )
    graph.add_intake_form(
        "Patient-1",
        IntakeForm(
            intake_form_id="IntakeForm-1",
            medical_history=MedicalHistory(
                had_surgery=["Tonsillectomy"],
                chronic_illness=[],
                medication_allergies=["Penicillin"],
                family_medical_history=["Hypertension"],
            ),
            social_history=SocialHistory(
                smoking_habit="Never smoker",
                drinking_habit="Occasional",
                diet="Balanced diet",
                exercise_routine="Walks daily",
            ),
        ),
    )
    graph.add_encounter(
        "Patient-1",
        Encounter(
            encounter_id="Encounter-1",
            date=date(2021, 1, 5),
            specialty="General Medicine",
            provider_ref="Provider-1",
            symptoms=[Symptom("Headaches", "moderate"), Symptom("Dizziness", "mild")],
            vitals=[
                VitalSign(
                    body_temperature=36.8,
                    blood_pressure="122/78",
                    weight=82.0,
                    heart_rate=72.0,
                )
            ],
            tests=[
                DiagTest(
                    test_name="Complete Blood Count-CBC",
                    results="Normal",
                    normal_range="Within reference intervals",
                )
            ],
            diagnoses=[
                Diagnosis("Vitamin D deficiency", ConceptCode(CodeSystem.ICD10, "E55.9"))
            ],
            medications=[Medication("Vitamin D supplement", "2000 IU", "Daily")],
            care_plans=[
                CarePlan(
                    plan_id="CarePlan-1",
                    description="Follow-up with a Pulmonologist recommended",
                    referral_specialty="Pulmonology",
                )
            ],
        ),
    )
    return graph


@pytest.fixture
def encounter_one_graph() -> JourneyGraph:
    return build_encounter_one_graph()
