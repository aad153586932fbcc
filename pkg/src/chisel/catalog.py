"""Published reference values, coefficients in ascending degree."""

from dataclasses import dataclass
from pathlib import Path

from .exactpoly import Polynomial

DATA_DIR = Path(__file__).resolve().parents[2] / "data"
SMOOTH_REFLEXIVE_9D_FILE = DATA_DIR / "smooth_reflexive_9d.poly"


@dataclass(frozen=True)
class KnownPolynomial:
    name: str
    coefficients: tuple[str, ...]
    hstar: tuple[str, ...] = ()

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial.from_coefficients(self.coefficients)


B3 = KnownPolynomial("B_3", ("1", "9", "1719", "18591"))
B4 = KnownPolynomial("B_4", ("1", "-45", "15363", "501921"))

# the printed t^5 term lost its denominator; 589345/9 is the closed-form value
Q7_5_2 = KnownPolynomial(
    "Q_7(5,2)",
    ("1", "-11/7", "1729/5", "182027/45", "64729/3", "589345/9", "1640113/15", "24608351/315"),
)

P1_28 = KnownPolynomial(
    "P^1(28,498205702352484)",
    (
        "1",
        "-2541865828329",
        "-248254149429756452913678525969",
        "619688517319652881734980589359332452421773",
        "5633398927928862087321748973638659814694960718075062244",
    ),
)
P1_28_A = 498205702352484

P1_6_730 = KnownPolynomial(
    "P^1(6,730)",
    ("1", "-971", "-1215", "1271473119", "267104933370"),
    ("1", "268376404299", "2941968690561", "2934339846011", "265833460008"),
)

P2_8_8599 = KnownPolynomial(
    "P^2(8,8599)",
    (
        "1",
        "-9775",
        "-289492130",
        "-237422178",
        "12014689492982241",
        "19723429316570261841",
    ),
    (
        "1",
        "19735444005536319994",
        "512929309125860809290",
        "1301746334895061755914",
        "512689015334843195945",
        "19711414627129339776",
    ),
)
P2_8_8599_POINTS = 19735444005536320000
P2_8_8599_BOUNDARY = 24029378406980224

Q1_5_457 = KnownPolynomial(
    "Q^1(5,457)",
    ("1", "-191", "-648", "176889015", "19125906543"),
    ("1", "19302794715", "210915640245", "209854304999", "18949017072"),
)

Q3_9_46099 = KnownPolynomial(
    "Q^3(9,46099)",
    (
        "1",
        "-19167",
        "-13464323277",
        "-615783337806158",
        "-340786031913009",
        "331568043035736113553429",
        "2178889417115552212024508181",
    ),
)

SMOOTH_REFLEXIVE_9D = KnownPolynomial(
    "smooth reflexive 9-polytope",
    (
        "1",
        "-6673/630",
        "11915/1008",
        "3838711/9072",
        "117857/64",
        "19058687/4320",
        "630095/96",
        "9074291/1512",
        "12477727/4032",
        "12477727/18144",
    ),
)

# cut-simplex alpha values, rows n = 1..7, columns k = 0..n
ALPHA_TABLE = (
    ("1/2", "1"),
    ("1/8", "1/2", "1"),
    ("1/24", "5/36", "1/2", "1"),
    ("1/64", "1/24", "7/48", "1/2", "1"),
    ("1/160", "9/800", "1/24", "3/20", "1/2", "1"),
    ("1/384", "1/720", "127/14400", "1/24", "11/72", "1/2", "1"),
    ("1/896", "-5/3136", "-1/800", "61/8400", "1/24", "13/84", "1/2", "1"),
)

# (label, dim, vertices, edges or None, facets)
FACE_COUNTS = (
    ("B_4", 3, 648, 972, 326),
    ("P^1(6,730)", 4, 11664, None, 2920),
    ("Q^1(5,457)", 4, 5832, None, None),
)
