double normalizeScore(double raw, double mean, double deviation) {
    double shifted = raw - mean;
    double result = 0.0;
    double spread = deviation;
    if (spread < 0.0) {
        spread = -spread;
    }
    if (spread != 0.0) {
        result = shifted / spread;
    }
    if (result > 6.0) {
        result = 6.0;
    }
    return result;
}
