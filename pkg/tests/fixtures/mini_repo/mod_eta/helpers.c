#include "model.h"

static double eta_cap(double w) {
    if (w > ETA_LIMIT) {
        return ETA_LIMIT;
    }
    return w;
}

double eta_normalized_weight(const struct eta_item *head) {
    double total = eta_total_weight(head);
    double capped = eta_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int eta_bucket(double w) {
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
