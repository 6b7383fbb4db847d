double averageOf(double[] samples) {
    double sum = 0.0;
    int n = samples.length;
    for (int i = 0; i < n; i++) {
        sum = sum + samples[i];
    }
    if (n == 0) {
        return 0.0;
    }
    return sum / n;
}
