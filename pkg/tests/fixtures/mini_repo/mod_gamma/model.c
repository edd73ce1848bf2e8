#include "model.h"

void gamma_item_init(struct gamma_item *it, int id, double weight) {
    it->id = id;
    it->weight = weight;
    it->next = 0;
}

double gamma_total_weight(const struct gamma_item *head) {
    double total = 0.0;
    while (head != 0) {
        total += head->weight;
        head = head->next;
    }
    return total;
}

const struct gamma_item *gamma_find(const struct gamma_item *head, int id) {
    for (const struct gamma_item *cur = head; cur != 0; cur = cur->next) {
        if (cur->id == id) {
            return cur;
        }
    }
    return 0;
}

void gamma_collect(const struct gamma_item *head, struct gamma_stats *out) {
    out->count = 0;
    out->total = 0.0;
    while (head != 0) {
        if (head->weight > 0.0) {
            out->count += 1;
            out->total += head->weight;
        }
        head = head->next;
    }
}
