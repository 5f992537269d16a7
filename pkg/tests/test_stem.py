import pytest

from fuzzyjoin import stem

# classic reference vectors for the suffix-stripping algorithm, end to end
VECTORS = [
    ("caresses", "caress"),
    ("ponies", "poni"),
    ("ties", "ti"),
    ("caress", "caress"),
    ("cats", "cat"),
    ("flies", "fli"),
    ("mules", "mule"),
    ("feed", "feed"),
    ("agreed", "agre"),
    ("plastered", "plaster"),
    ("bled", "bled"),
    ("motoring", "motor"),
    ("sing", "sing"),
    ("denied", "deni"),
    ("owned", "own"),
    ("sized", "size"),
    ("meetings", "meet"),
    ("stating", "state"),
    ("hopping", "hop"),
    ("tanned", "tan"),
    ("falling", "fall"),
    ("hissing", "hiss"),
    ("fizzed", "fizz"),
    ("failing", "fail"),
    ("filing", "file"),
    ("running", "run"),
    ("happy", "happi"),
    ("sky", "sky"),
    ("relational", "relat"),
    ("conditional", "condit"),
    ("valenci", "valenc"),
    ("hesitanci", "hesit"),
    ("digitizer", "digit"),
    ("conformabli", "conform"),
    ("radicalli", "radic"),
    ("itemization", "item"),
    ("sensational", "sensat"),
    ("traditional", "tradit"),
    ("reference", "refer"),
    ("colonizer", "colon"),
    ("plotted", "plot"),
    ("electrical", "electr"),
    ("electriciti", "electr"),
    ("hopeful", "hope"),
    ("goodness", "good"),
    ("formalize", "formal"),
    ("formaliti", "formal"),
    ("revival", "reviv"),
    ("allowance", "allow"),
    ("inference", "infer"),
    ("airliner", "airlin"),
    ("adjustable", "adjust"),
    ("defensible", "defens"),
    ("irritant", "irrit"),
    ("replacement", "replac"),
    ("adjustment", "adjust"),
    ("dependent", "depend"),
    ("adoption", "adopt"),
    ("communism", "commun"),
    ("activate", "activ"),
    ("angulariti", "angular"),
    ("homologou", "homolog"),
    ("effective", "effect"),
    ("bowdlerize", "bowdler"),
    ("probate", "probat"),
    ("rate", "rate"),
    ("cease", "ceas"),
    ("controll", "control"),
    ("roll", "roll"),
]


@pytest.mark.parametrize("word,expected", VECTORS)
def test_reference_vectors(word, expected):
    assert stem(word) == expected


def test_short_words_unchanged():
    for w in ("a", "is", "be", "on"):
        assert stem(w) == w


def test_non_alphabetic_unchanged():
    for w in ("2008", "r2d2", "a-b", "x!"):
        assert stem(w) == w
