double discountPrice(double price, int quantity) {
    double rate = 0.0;
    if (quantity >= 100) {
        rate = 0.15;
    } else if (quantity >= 10) {
        rate = 0.05;
    }
    double total = price * quantity;
    double saved = total * rate;
    return total - saved;
}
