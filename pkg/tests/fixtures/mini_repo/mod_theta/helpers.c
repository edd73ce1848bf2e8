#include "model.h"

static double theta_cap(double w) {
    if (w > THETA_LIMIT) {
        return THETA_LIMIT;
    }
    return w;
}

double theta_normalized_weight(const struct theta_item *head) {
    double total = theta_total_weight(head);
    double capped = theta_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int theta_bucket(double w) {
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
