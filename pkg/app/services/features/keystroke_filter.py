from collections.abc import Sequence

from app.models.features import KeystrokeFilterState, ReplyCandidate


def keystroke_filter(
    state: KeystrokeFilterState, key: str, candidates: Sequence[ReplyCandidate]
) -> tuple[KeystrokeFilterState, list[ReplyCandidate]]:
    """
    Narrow candidates by the typed prefix until the freeze threshold.

    Once keystrokes_seen reaches the threshold the list is frozen and every
    later key returns it unchanged. A threshold of 0 freezes the unfiltered
    list on the first call.

    :param state: Current filter state of the surface
    :param key: Typed text (usually one character)
    :param candidates: Full candidate list of the surface
    :return: New state and the visible candidates
    """
    seen = state.keystrokes_seen + 1
    if state.frozen and state.frozen_candidates is not None:
        return state.model_copy(update={"keystrokes_seen": seen}), list(state.frozen_candidates)

    update: dict = {"keystrokes_seen": seen}
    if state.freeze_threshold == 0:
        visible = list(candidates)
    else:
        typed = state.typed + key
        visible = [c for c in candidates if c.text.casefold().startswith(typed.casefold())]
        update["typed"] = typed
    if seen >= state.freeze_threshold:
        update |= {"frozen": True, "frozen_candidates": tuple(visible)}
    return state.model_copy(update=update), visible
