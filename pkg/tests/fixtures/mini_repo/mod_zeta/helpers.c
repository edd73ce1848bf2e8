#include "model.h"

static double zeta_cap(double w) {
    if (w > ZETA_LIMIT) {
        return ZETA_LIMIT;
    }
    return w;
}

double zeta_normalized_weight(const struct zeta_item *head) {
    double total = zeta_total_weight(head);
    double capped = zeta_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int zeta_bucket(double w) {
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
