from ray_stmod.constants import DURATION_KEY, STEP_KEY, TRIAL_KEY


class SortedKeysMixin:
    def _sorted_keys(self, keys, keys_ignored=None):
        """Sort keys, dropping the ones that should be ignored.

        Among the remaining keys:
          * 'trial' is put first, then 'step';
          * 'dur_s' is put last;
          * all remaining keys are sorted alphabetically.
        """
        sorted_keys = []
        keys_ignored = keys_ignored or {}

        for key in (TRIAL_KEY, STEP_KEY):
            if (key in keys) and (key not in keys_ignored):
                sorted_keys.append(key)

        for key in sorted(keys, key=str):
            if key in keys_ignored or key in sorted_keys:
                continue
            if key != DURATION_KEY:
                sorted_keys.append(key)

        if (DURATION_KEY in keys) and (DURATION_KEY not in keys_ignored):
            sorted_keys.append(DURATION_KEY)

        return sorted_keys
