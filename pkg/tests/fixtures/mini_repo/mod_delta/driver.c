#include "model.h"

int delta_run(int n) {
    struct delta_item items[8];
    struct delta_stats stats;
    for (int i = 0; i < n && i < 8; i++) {
        delta_item_init(&items[i], i, i * 1.5);
        if (i > 0) {
            items[i - 1].next = &items[i];
        }
    }
    delta_collect(&items[0], &stats);
    const struct delta_item *hit = delta_find(&items[0], n / 2);
    if (hit == 0) {
        return -1;
    }
    return stats.count + hit->id;
}
