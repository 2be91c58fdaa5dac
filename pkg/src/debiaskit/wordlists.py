"""Default word lists used by the CLI, the service presets, and the tests.

These mirror the lists commonly used in the embedding-debiasing literature:
gendered target words, stereotyped occupation and adjective attributes,
definitionally gendered pronoun/noun pairs, and two configurable lists of
statistically gendered first names.  All lowercase to match the bundled
vocabulary.
"""

from __future__ import annotations

from .metrics import WeatSets
from .store import PairedWordSet, WordSet

# Target word sets for WEAT (male / female words).
WEAT_MALE = WordSet(
    "Male words",
    ("male", "man", "boy", "brother", "he", "him", "his", "son"),
)
WEAT_FEMALE = WordSet(
    "Female words",
    ("female", "woman", "girl", "sister", "she", "her", "hers", "daughter"),
)

# Stereotyped occupation attributes.
OCCUPATIONS_MALE = WordSet(
    "Stereotypically male occupations",
    ("doctor", "engineer", "lawyer", "mathematician", "banker"),
)
OCCUPATIONS_FEMALE = WordSet(
    "Stereotypically female occupations",
    ("homemaker", "receptionist", "dancer", "maid", "nurse"),
)
OCCUPATIONS_ALL = WordSet(
    "Occupations", OCCUPATIONS_MALE.tokens + OCCUPATIONS_FEMALE.tokens
)

# Stereotyped adjective attributes (held out from training).
ADJECTIVES_MALE = WordSet(
    "Stereotypically male adjectives", ("strong", "intelligent", "brave", "important")
)
ADJECTIVES_FEMALE = WordSet(
    "Stereotypically female adjectives", ("pretty", "beautiful", "shy", "homely")
)

DEFAULT_WEAT = WeatSets(
    x=WEAT_MALE, y=WEAT_FEMALE, a=OCCUPATIONS_MALE, b=OCCUPATIONS_FEMALE
)
ADJECTIVE_WEAT = WeatSets(
    x=WEAT_MALE, y=WEAT_FEMALE, a=ADJECTIVES_MALE, b=ADJECTIVES_FEMALE
)

# Definitionally gendered lists used for nullspace-projection demos.
INLP_MALE = WordSet(
    "Definitionally male",
    ("man", "he", "him", "his", "guy", "boy", "grandpa", "uncle", "brother",
     "son", "nephew", "mr"),
)
INLP_FEMALE = WordSet(
    "Definitionally female",
    ("woman", "she", "her", "hers", "gal", "girl", "grandma", "aunt", "sister",
     "daughter", "niece"),
)

# Small seed sets for the linear-projection and hard-debiasing demos.
LP_SEEDS_M = WordSet("Male seed", ("man", "he"))
LP_SEEDS_F = WordSet("Female seed", ("woman", "she"))
LP_EVALUATION = WordSet(
    "Evaluation",
    ("receptionist", "nurse", "scientist", "mathematician", "banker", "engineer"),
)
HD_EQUALIZE = PairedWordSet((("boy", "girl"), ("sister", "brother")))
HD_EVALUATION = WordSet(
    "Evaluation", ("engineer", "lawyer", "receptionist", "nurse")
)

# Pronoun/noun seeds and occupation seeds for the two-subspace rotation demo.
ROTATION_GENDER_SEEDS = WordSet(
    "Gender seeds", ("he", "his", "him", "she", "her", "hers", "man", "woman")
)
ROTATION_OCCUPATION_SEEDS = WordSet(
    "Occupation seeds",
    ("engineer", "scientist", "lawyer", "banker", "nurse", "homemaker", "maid",
     "receptionist"),
)
ROTATION_EVALUATION = WordSet("Evaluation", ("grandma", "grandpa", "programmer"))

# Royalty-bias exploration.
ROYALTY_SEEDS_ROYAL = WordSet("Royal seed", ("king", "queen"))
ROYALTY_SEEDS_COMMON = WordSet("Common seed", ("man", "woman"))
ROYALTY_EVALUATION = WordSet(
    "Adjectives",
    ("obnoxious", "considerate", "plain", "fancy", "attentive", "important",
     "majestic"),
)

# Statistically gendered first names (configurable; these are the defaults).
NAMES_MALE = WordSet(
    "Male names",
    ("jack", "john", "george", "paul", "mike", "steve", "bill", "frank", "tom",
     "peter", "bob", "james", "david", "mark", "jeff", "kevin", "brian",
     "scott", "eric", "adam"),
)
NAMES_FEMALE = WordSet(
    "Female names",
    ("susan", "mary", "kate", "lisa", "anna", "emma", "sarah", "amy", "karen",
     "nancy", "laura", "julia", "emily", "rachel", "donna", "alice", "diane",
     "helen", "megan", "claire"),
)

# Seeds for the PCA subspace demo.
PCA_GENDER_SEEDS = WordSet(
    "Gendered words", ("man", "woman", "brother", "sister", "he", "she")
)
PAIRED_GENDER_SEEDS = PairedWordSet(
    (("man", "woman"), ("he", "she"), ("brother", "sister"))
)
TWO_MEANS_F = WordSet("Female seed", ("she", "woman", "sister"))
TWO_MEANS_M = WordSet("Male seed", ("he", "man", "brother"))
