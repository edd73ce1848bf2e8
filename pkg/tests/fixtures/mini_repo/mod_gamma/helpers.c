#include "model.h"

static double gamma_cap(double w) {
    if (w > GAMMA_LIMIT) {
        return GAMMA_LIMIT;
    }
    return w;
}

double gamma_normalized_weight(const struct gamma_item *head) {
    double total = gamma_total_weight(head);
    double capped = gamma_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int gamma_bucket(double w) {
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
