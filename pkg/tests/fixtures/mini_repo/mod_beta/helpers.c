#include "model.h"

static double beta_cap(double w) {
    if (w > BETA_LIMIT) {
        return BETA_LIMIT;
    }
    return w;
}

double beta_normalized_weight(const struct beta_item *head) {
    double total = beta_total_weight(head);
    double capped = beta_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int beta_bucket(double w) {
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
