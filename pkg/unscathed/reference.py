"""Published estimates that computed results are compared against.

Values are stored exactly as printed, in parenthesised-uncertainty
notation, and parsed on access. Region values are keyed by the
signature label they are printed under.
"""

from typing import Dict, List, Mapping, Optional, TypeVar

from pydantic import BaseModel, ConfigDict

from .models import C5Assignment
from .report import parse_uncertainty

V = TypeVar("V")


class PublishedValue(BaseModel):
    """One printed estimate of a quantity."""

    model_config = ConfigDict(frozen=True)

    quantity: str
    source: str
    text: str

    @property
    def value(self) -> float:
        return parse_uncertainty(self.text)[0]

    @property
    def uncertainty(self) -> Optional[float]:
        return parse_uncertainty(self.text)[1]


NUMERICAL = "numerical integration"
MC_INTEGRATION = "Monte Carlo integration"
MC_SIMULATION = "Monte Carlo simulation"
TAO_WU = "Tao–Wu"
WINTHER = "Winther"
FINCH = "Finch"

P_ESTIMATES: Dict[str, str] = {
    TAO_WU: "0.284051",
    WINTHER: "0.28418(1)",
    MC_INTEGRATION: "0.2841817(62)",
    MC_SIMULATION: "0.28418587(20)",
    NUMERICAL: "0.28418556313(96)",
}

CN_ESTIMATES: Dict[str, Dict[str, str]] = {
    TAO_WU: {"c2": "0.3163335", "c3": "0.0329390", "c4": "0.0006575", "c5": "0.0000010"},
    FINCH: {"c2": "0.316585", "c3": "0.033056"},
    MC_INTEGRATION: {
        "c2": "0.3165821(57)",
        "c3": "0.0330571(25)",
        "c4": "0.00065702(18)",
        "c5": "0.0000002038025(94)",
    },
    MC_SIMULATION: {
        "c2": "0.3165833(13)",
        "c3": "0.03305604(40)",
        "c4": "0.000657115(52)",
        "c5": "0.00000020460(92)",
    },
    NUMERICAL: {
        "c2": "0.3165850647281(20)",
        "c3": "0.0330563647606(88)",
        "c4": "0.00065706696(46)",
        "c5": "0.00000020380(48)",
    },
}

# Region integrals under their printed labels. The two n=5 columns are
# printed transposed relative to the orbit-size coefficients.
REGION_ESTIMATES: Dict[str, Dict[str, str]] = {
    TAO_WU: {
        "(I,IV)": "0.028880062",
        "(II,III)": "0.129286084",
        "(I,I,III)": "0.001168842",
        "(II,II,II)": "0.011207724",
    },
    MC_INTEGRATION: {
        "(I,IV)": "0.0288809(20)",
        "(II,III)": "0.1294101(20)",
        "(I,I,III)": "0.00117493(32)",
        "(I,II,II)": "0.00448895(76)",
        "(I,II,III)": "0.000630599(19)",
        "(II,II,II)": "0.01228190(44)",
        "(I,I,I,II)": "0.000057108(43)",
        "(I,I,II,II)": "0.0000640379(66)",
        "(I,II,I,II)": "0.000060504(13)",
        "(I,II,II,II)": "0.00001285586(73)",
        "(I,I,I,I,II)": "0.0000001904612(94)",
        "(I,I,I,I,I)": "0.00000000266825(17)",
    },
    MC_SIMULATION: {
        "(I,IV)": "0.02888152(25)",
        "(II,III)": "0.12941012(56)",
        "(I,I,III)": "0.001174887(43)",
        "(I,II,II)": "0.004489011(83)",
        "(I,II,III)": "0.000630586(23)",
        "(II,II,II)": "0.01228098(22)",
        "(I,I,I,II)": "0.0000571294(77)",
        "(I,I,II,II)": "0.0000640431(81)",
        "(I,II,I,II)": "0.000060511(11)",
        "(I,II,II,II)": "0.0000128506(36)",
        "(I,I,I,I,II)": "0.00000019142(89)",
        "(I,I,I,I,I)": "0.000000002635(47)",
    },
    NUMERICAL: {
        "(I,IV)": "0.0288814929604(10)",
        "(II,III)": "0.1294110394036666(10)",
        "(I,I,III)": "0.00117490461633(40)",
        "(I,II,II)": "0.00448886036115(40)",
        "(I,II,III)": "0.00063058779302(40)",
        "(II,II,II)": "0.0122815430701(40)",
        "(I,I,I,II)": "0.000057122200(80)",
        "(I,I,II,II)": "0.0000640437671(80)",
        "(I,II,I,II)": "0.000060491237(40)",
        "(I,II,II,II)": "0.0000128551537(80)",
        "(I,I,I,I,II)": "0.00000019046(48)",
        "(I,I,I,I,I)": "0.00000000266817(16)",
    },
}

COMPOSITE_ESTIMATES: Dict[str, Dict[str, str]] = {
    TAO_WU: {"I(0,0)": "0.258572168", "I(1,0,0)": "0.005621972"},
    MC_INTEGRATION: {"I(0,0)": "0.2588203(40)", "I(1,0,0)": "0.00575015(76)"},
    MC_SIMULATION: {"I(0,0)": "0.2588202(11)", "I(1,0,0)": "0.005750133(94)"},
    NUMERICAL: {"I(0,0)": "0.2588220788073332(20)", "I(1,0,0)": "0.0057500359472(12)"},
}

# Printed c_3 assembly: c_3 = I(0,0,0) + 3·I(1,0,0) + 3·I(1,1,0).
TAO_WU_C3_TERMS = {"I(0,0,0)": 0.011207724, "I(1,0,0)": 0.005621972, "I(1,1,0)": 0.001168842}
TAO_WU_C3_COEFFICIENTS = {"I(0,0,0)": 1, "I(1,0,0)": 3, "I(1,1,0)": 3}
TAO_WU_C3_PRINTED = 0.0329390
TAO_WU_C3_RECOMPUTED = 0.031580166
TAO_WU_P_FROM_TERMS = 0.285410

FIVE_POINT_LABELS = ("(I,I,I,I,I)", "(I,I,I,I,II)")


def published(source: str) -> List[PublishedValue]:
    """Every printed value of one source, P first, then c_n, regions and composites."""
    values = []
    if source in P_ESTIMATES:
        values.append(PublishedValue(quantity="P", source=source, text=P_ESTIMATES[source]))
    for table in (CN_ESTIMATES, REGION_ESTIMATES, COMPOSITE_ESTIMATES):
        for quantity, text in table.get(source, {}).items():
            values.append(PublishedValue(quantity=quantity, source=source, text=text))
    return values


def region_values(source: str, c5_assignment: C5Assignment = "printed") -> Dict[str, float]:
    """Printed region integrals relabelled to match ``c5_assignment``.

    Under the printed c_5 composition the orbit-size coefficient 5 sits on
    (I,I,I,I,II), so the two five-point columns trade labels.
    """
    values = {name: parse_uncertainty(text)[0] for name, text in REGION_ESTIMATES[source].items()}
    return relabel_five_point(values) if c5_assignment == "printed" else values


def region_uncertainties(source: str, c5_assignment: C5Assignment = "printed") -> Dict[str, float]:
    values = {
        name: parse_uncertainty(text)[1] or 0.0 for name, text in REGION_ESTIMATES[source].items()
    }
    return relabel_five_point(values) if c5_assignment == "printed" else values


def relabel_five_point(values: Mapping[str, V]) -> Dict[str, V]:
    swapped = dict(values)
    first, second = FIVE_POINT_LABELS
    if first in values and second in values:
        swapped[first], swapped[second] = values[second], values[first]
    return swapped


def published_rows(c5_assignment: C5Assignment = "printed") -> Dict[str, Dict[str, str]]:
    """Printed strings per source and quantity, five-point labels matched to ``c5_assignment``."""
    rows: Dict[str, Dict[str, str]] = {}
    for source in (TAO_WU, WINTHER, FINCH):
        row = {entry.quantity: entry.text for entry in published(source)}
        rows[source] = relabel_five_point(row) if c5_assignment == "printed" else row
    return rows
