boolean sortPass(int[] data) {
    boolean swapped = false;
    for (int i = 1; i < data.length; i++) {
        if (data[i - 1] > data[i]) {
            int tmp = data[i - 1];
            data[i - 1] = data[i];
            data[i] = tmp;
            swapped = true;
        }
    }
    return swapped;
}
