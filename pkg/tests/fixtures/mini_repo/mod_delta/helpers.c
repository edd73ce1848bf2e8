#include "model.h"

static double delta_cap(double w) {
    if (w > DELTA_LIMIT) {
        return DELTA_LIMIT;
    }
    return w;
}

double delta_normalized_weight(const struct delta_item *head) {
    double total = delta_total_weight(head);
    double capped = delta_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int delta_bucket(double w) {
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
