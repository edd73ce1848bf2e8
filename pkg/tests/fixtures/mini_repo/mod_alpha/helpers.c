#include "model.h"

static double alpha_cap(double w) {
    if (w > ALPHA_LIMIT) {
        return ALPHA_LIMIT;
    }
    return w;
}

double alpha_normalized_weight(const struct alpha_item *head) {
    double total = alpha_total_weight(head);
    double capped = alpha_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int alpha_bucket(double w) {
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
