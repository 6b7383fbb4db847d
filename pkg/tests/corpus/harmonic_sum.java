double harmonicSum(int terms) {
    double total = 0.0;
    int bound = terms;
    if (bound > 100000) {
        bound = 100000;
    }
    for (int k = 1; k <= bound; k++) {
        double term = 1.0 / k;
        total = total + term;
    }
    return total;
}
