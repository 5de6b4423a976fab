from rapidfuzz import fuzz
from typing import List, Optional


def get_similarities(
    query: str,
    choices: List[str],
    case_sensitive: bool = True,
    threshold: float = 0,
) -> List[tuple[str, float]]:
    """
    Score every choice against the query.

    Args:
        query: The string to compare against
        choices: Names to compare with
        case_sensitive: Whether comparison should be case-sensitive
        threshold: Minimum score (0-100) a choice needs to be kept

    Returns:
        (choice, score) pairs meeting the threshold, best first
    """
    results = []
    for choice in choices:
        if case_sensitive:
            score = fuzz.ratio(query, choice)
        else:
            score = fuzz.ratio(query.lower(), choice.lower())
        if score >= threshold:
            results.append((choice, score))
    results.sort(key=lambda item: (-item[1], item[0]))
    return results


def suggest(query: str, choices: List[str], threshold: float = 60) -> Optional[str]:
    """Closest known name for a mistyped one, if any is close enough."""
    matches = get_similarities(query, choices, case_sensitive=False, threshold=threshold)
    return matches[0][0] if matches else None
