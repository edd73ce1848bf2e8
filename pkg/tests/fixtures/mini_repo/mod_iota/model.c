#include "model.h"

void iota_item_init(struct iota_item *it, int id, double weight) {
    it->id = id;
    it->weight = weight;
    it->next = 0;
}

double iota_total_weight(const struct iota_item *head) {
    double total = 0.0;
    while (head != 0) {
        total += head->weight;
        head = head->next;
    }
    return total;
}

const struct iota_item *iota_find(const struct iota_item *head, int id) {
    for (const struct iota_item *cur = head; cur != 0; cur = cur->next) {
        if (cur->id == id) {
            return cur;
        }
    }
    return 0;
}

void iota_collect(const struct iota_item *head, struct iota_stats *out) {
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
