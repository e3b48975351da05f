"""A fully linked reference journey for one synthetic patient, John Doe.

John Doe is a 39-year-old white male (39 at his first encounter) whose
intake form records an appendectomy, hypertension, penicillin and latex
allergies, and a family history of type 2 diabetes and coronary artery
disease; he is a former smoker and moderate social drinker with a balanced
diet and a regular jogging routine.  His journey runs through four
encounters: a general-medicine visit that finds a vitamin D deficiency and
refers him to a pulmonologist, the pulmonology visit that diagnoses mild
sleep apnea, an allergy consultation, and its follow-up a year later.

Names, dates, providers, and contact details beyond that profile are
synthetic filler.  Construction is deterministic, so the serialized bundle
is byte-for-byte stable across calls and runs.
"""

from __future__ import annotations

from datetime import date

from .bundle import serialize_bundle
from .codes import CodeSystem, ConceptCode
from .graph import JourneyGraph
from .records import (
    CarePlan,
    ContactInformation,
    DiagTest,
    Diagnosis,
    EdgeKind,
    Encounter,
    IntakeForm,
    MedicalHistory,
    Medication,
    Patient,
    Provider,
    SocialHistory,
    Symptom,
    VitalSign,
)

JOHN_DOE_ID = "JohnDoe"

ENCOUNTER_GENERAL_MEDICINE = "Encounter-GeneralMedicine-20210105"
ENCOUNTER_PULMONOLOGY = "Encounter-Pulmonology-20210315"
ENCOUNTER_ALLERGY = "Encounter-Allergy-20210725"
ENCOUNTER_ALLERGY_FOLLOWUP = "Encounter-AllergyFollowUp-20220418"


def _icd10(code: str) -> ConceptCode:
    return ConceptCode(CodeSystem.ICD10, code)


def john_doe_graph() -> JourneyGraph:
    """Build the John Doe journey as a graph."""
    graph = JourneyGraph()
    graph.add_patient(
        Patient(
            patient_id=JOHN_DOE_ID,
            patient_name="John Doe",
            birth_date=date(1981, 7, 14),
            race="White",
            gender="Male",
            contact=ContactInformation(
                address="742 Maple Street, Springfield",
                phone_number="555-0134",
                email="john.doe@example.com",
                emergency_contact="Jane Doe (spouse), 555-0198",
            ),
            insurance_name="Acme Health Insurance",
            insurance_id="AHI-88421",
        )
    )
    graph.add_provider(
        Provider(
            provider_id="Provider-GeneralMedicine",
            provider_name="Dr. Emily Carter",
            specialization="General Medicine",
            affiliated_institution="Riverside Medical Center",
            years_of_experience=12,
        )
    )
    graph.add_provider(
        Provider(
            provider_id="Provider-Pulmonology",
            provider_name="Dr. Raj Patel",
            specialization="Pulmonology",
            affiliated_institution="Riverside Medical Center",
            years_of_experience=15,
        )
    )
    graph.add_provider(
        Provider(
            provider_id="Provider-Allergy",
            provider_name="Dr. Susan Lee",
            specialization="Allergy and Immunology",
            affiliated_institution="Riverside Medical Center",
            years_of_experience=9,
        )
    )
    graph.add_intake_form(
        JOHN_DOE_ID,
        IntakeForm(
            intake_form_id="IntakeForm-JohnDoe",
            medical_history=MedicalHistory(
                had_surgery=["Appendectomy"],
                chronic_illness=["Hypertension"],
                medication_allergies=["Penicillin", "Latex"],
                family_medical_history=["Type 2 diabetes", "Coronary artery disease"],
            ),
            social_history=SocialHistory(
                smoking_habit="Former smoker",
                drinking_habit="Moderate, social drinker",
                diet="Balanced diet",
                exercise_routine="Regular exercise, jogging",
                marital_status="Married",
                occupation="Accountant",
                education_level="Bachelor's degree",
            ),
        ),
    )
    graph.add_encounter(
        JOHN_DOE_ID,
        Encounter(
            encounter_id=ENCOUNTER_GENERAL_MEDICINE,
            date=date(2021, 1, 5),
            specialty="General Medicine",
            provider_ref="Provider-GeneralMedicine",
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
            diagnoses=[Diagnosis("Vitamin D deficiency", _icd10("E55.9"))],
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
    graph.add_encounter(
        JOHN_DOE_ID,
        Encounter(
            encounter_id=ENCOUNTER_PULMONOLOGY,
            date=date(2021, 3, 15),
            specialty="Pulmonology",
            provider_ref="Provider-Pulmonology",
            symptoms=[Symptom("Snoring", "moderate"), Symptom("Daytime fatigue", "mild")],
            vitals=[
                VitalSign(
                    body_temperature=36.7,
                    blood_pressure="124/80",
                    weight=82.5,
                    heart_rate=70.0,
                )
            ],
            tests=[
                DiagTest(
                    test_name="Sleep study",
                    results="Mild obstructive sleep apnea, AHI 7",
                    normal_range="AHI < 5",
                )
            ],
            diagnoses=[Diagnosis("Mild sleep apnea", _icd10("G47.33"))],
            care_plans=[
                CarePlan(
                    plan_id="CarePlan-2",
                    description="Positional therapy and weight management; review in six months",
                )
            ],
        ),
    )
    graph.add_encounter(
        JOHN_DOE_ID,
        Encounter(
            encounter_id=ENCOUNTER_ALLERGY,
            date=date(2021, 7, 25),
            specialty="Allergy",
            provider_ref="Provider-Allergy",
            symptoms=[Symptom("Sneezing", "moderate"), Symptom("Itchy eyes", "mild")],
            tests=[
                DiagTest(
                    test_name="Skin prick test",
                    results="Positive for grass pollen",
                    normal_range="Negative",
                )
            ],
            diagnoses=[Diagnosis("Seasonal allergic rhinitis", _icd10("J30.2"))],
            medications=[Medication("Loratadine", "10 mg", "Daily")],
            care_plans=[
                CarePlan(
                    plan_id="CarePlan-3",
                    description="Allergen avoidance; return for follow-up testing",
                )
            ],
        ),
    )
    graph.add_encounter(
        JOHN_DOE_ID,
        Encounter(
            encounter_id=ENCOUNTER_ALLERGY_FOLLOWUP,
            date=date(2022, 4, 18),
            specialty="Allergy",
            provider_ref="Provider-Allergy",
            symptoms=[Symptom("Sneezing", "mild")],
            tests=[
                DiagTest(
                    test_name="Skin prick test",
                    results="Reduced reactivity to grass pollen",
                    normal_range="Negative",
                )
            ],
            diagnoses=[Diagnosis("Seasonal allergic rhinitis", _icd10("J30.2"))],
            medications=[Medication("Loratadine", "10 mg", "As needed")],
            care_plans=[
                CarePlan(
                    plan_id="CarePlan-4",
                    description="Continue current regimen; return as needed",
                )
            ],
        ),
    )
    # The pulmonology visit exists because the general-medicine care plan
    # referred him there, so it is linked causedBy (effect -> cause).
    graph.link(
        EdgeKind.CAUSED_BY,
        ENCOUNTER_PULMONOLOGY,
        ENCOUNTER_GENERAL_MEDICINE,
        via="CarePlan-1",
    )
    graph.link(EdgeKind.HAS_FOLLOWUP, ENCOUNTER_ALLERGY, ENCOUNTER_ALLERGY_FOLLOWUP)
    graph.link(EdgeKind.NEXT, ENCOUNTER_PULMONOLOGY, ENCOUNTER_ALLERGY)
    return graph


def john_doe_bundle() -> str:
    """The John Doe journey as canonical bundle text."""
    return serialize_bundle(john_doe_graph(), JOHN_DOE_ID)
