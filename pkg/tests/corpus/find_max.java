int findMax(int[] values) {
    int best = values[0];
    int at = 0;
    for (int i = 1; i < values.length; i++) {
        int candidate = values[i];
        if (candidate > best) {
            best = candidate;
            at = i;
        }
    }
    return best;
}
