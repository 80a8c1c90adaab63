"""Frozen expectations shared by the unit and acceptance suites.

The prompt strings are independent transcriptions of the bundled
templates rendered for the pair (dazwischen, dozwischn); they pin the
template content, not just the substitution mechanics.
"""

from dialex.metrics import IF_ERROR

JUDGE_2 = (
    "Is the Bavarian term 'dozwischn' an exact dialectal variant ('yes'), "
    "a dialectal morphological inflection ('inflected'), or not a dialectal "
    "variant ('no') of 'dazwischen' in Standard German? "
    'Return only "yes", "inflected", or "no".'
)
JUDGE_5 = (
    'Task: Is the Bavarian term: "dozwischn" a correct dialectal variant '
    'of the German term: "dazwischen"? Follow the given annotation '
    "guidelines.\n"
    "Guidelines:\n"
    "- yes: The candidate is an exact dialectal variation of the Standard "
    "German word.\n"
    "- inflected: The candidate is a morphologically inflected variant of "
    "the German word.\n"
    "- no: None of the two applies.\n"
    'Return only "yes", "inflected", or "no".'
)
JUDGE_8 = (
    "Is the Bavarian term 'dozwischn':\n"
    "- a dialectal translation of the German term 'dazwischen' → 'yes'\n"
    "- an inflection of the German term 'dazwischen' → 'inflected'\n"
    "- not a variant or inflected variant of the German term 'dazwischen' "
    "→ 'no'\n"
    "Answer only with 'yes', 'inflected', or 'no'."
)
TRANSLATE_7 = (
    "Translate the following word to German 'dozwischn'. "
    "Do not say any other word. "
)
TRANSLATE_12 = (
    "Translate the Bavarian term 'dozwischn' into High German form. "
    "Only return the High German form."
)
TRANSLATE_20 = (
    "Perform translation: convert the Bavarian form 'dozwischn' into its "
    "Standard German equivalent. Return only the Standard German form, "
    "with no additional explanation or formatting."
)

GOLDEN_RENDERS = {
    ("judge", 2): JUDGE_2,
    ("judge", 5): JUDGE_5,
    ("judge", 8): JUDGE_8,
    ("translate", 7): TRANSLATE_7,
    ("translate", 12): TRANSLATE_12,
    ("translate", 20): TRANSLATE_20,
}

# raw model output -> expected judgment outcome
JUDGMENT_CASES = [
    ("yes", "yes"),
    ("Yes", "yes"),
    ("YES.", "yes"),
    ("NO", "no"),
    ("Inflected.", "inflected"),
    ('"no"', "no"),
    ("'yes'", "yes"),
    ("'yes'.", "yes"),
    ('"Yes".', "yes"),
    ("  yes  ", "yes"),
    (" Yes .", "yes"),
    ("«inflected»", "inflected"),
    ("no,", "no"),
    ("inflected;", "inflected"),
    ("yes!", "yes"),
    ("„ja“", IF_ERROR),
    ("ja", IF_ERROR),
    ("The answer is yes", IF_ERROR),
    ("", IF_ERROR),
    ("yes!!", IF_ERROR),
    ("maybe", IF_ERROR),
    ("unresolved", IF_ERROR),
    ("IF_ERROR", IF_ERROR),
]

# raw model output -> expected translation outcome
TRANSLATION_CASES = [
    ("Überprüfung", "Überprüfung"),
    ("Überprüfung.", "Überprüfung"),
    ('"dazwischen"', "dazwischen"),
    ("„dazwischen“", "dazwischen"),
    ("'dazwischen'.", "dazwischen"),
    ("„Añjou“.", "Añjou"),
    ("«Berg»", "Berg"),
    ("Dazwischen", "Dazwischen"),
    ("l'art", "l'art"),
    ("  haus  ", "haus"),
    (" Tal.", "Tal"),
    ("Haus!", "Haus!"),
    ("Wort..", "Wort."),
    ("...", ".."),
    ("two words", IF_ERROR),
    ("two words.", IF_ERROR),
    ("'s Haus", IF_ERROR),
    ("", IF_ERROR),
    ("   ", IF_ERROR),
    ("\n", IF_ERROR),
    ("a\tb", IF_ERROR),
    (".", IF_ERROR),
    ('""', IF_ERROR),
]
