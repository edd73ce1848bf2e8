#include "model.h"

static double epsilon_cap(double w) {
    if (w > EPSILON_LIMIT) {
        return EPSILON_LIMIT;
    }
    return w;
}

double epsilon_normalized_weight(const struct epsilon_item *head) {
    double total = epsilon_total_weight(head);
    double capped = epsilon_cap(total);
    if (capped <= 0.0) {
        return 0.0;
    }
    return total / capped;
}

int epsilon_bucket(double w) {
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
