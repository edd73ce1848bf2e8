#include "model.h"

void epsilon_item_init(struct epsilon_item *it, int id, double weight) {
    it->id = id;
    it->weight = weight;
    it->next = 0;
}

double epsilon_total_weight(const struct epsilon_item *head) {
    double total = 0.0;
    while (head != 0) {
        total += head->weight;
        head = head->next;
    }
    return total;
}

const struct epsilon_item *epsilon_find(const struct epsilon_item *head, int id) {
    for (const struct epsilon_item *cur = head; cur != 0; cur = cur->next) {
        if (cur->id == id) {
            return cur;
        }
    }
    return 0;
}

void epsilon_collect(const struct epsilon_item *head, struct epsilon_stats *out) {
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
