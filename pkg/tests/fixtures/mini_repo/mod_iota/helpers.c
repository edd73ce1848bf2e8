#include "model.h"

static double iota_cap(double w) {
    if (w > IOTA_LIMIT) {
        return IOTA_LIMIT;
    }
    return w;
}

double iota_normalized_weight(const struct iota_item *head) {
    double total = iota_total_weight(head);
    double capped = iota_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int iota_bucket(double w) {
    switch ((int)(w * 4.0)) {
        case 0:
            return 0;
        case 1:
        case 2:
            return 1;
        default:
            return 2;
    }
}
