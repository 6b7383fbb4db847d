char hexDigit(int value) {
    int masked = value & 15;
    char result = '0';
    switch (masked) {
        case 10:
            result = 'a';
            break;
        case 11:
            result = 'b';
            break;
        case 12:
            result = 'c';
            break;
        default:
            result = (char) ('0' + masked);
            break;
    }
    return result;
}
