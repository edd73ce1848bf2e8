#include "model.h"

int iota_run(int n) {
    struct iota_item items[8];
    struct iota_stats stats;
    for (int i = 0; i < n && i < 8; i++) {
        iota_item_init(&items[i], i, i * 1.5);
        if (i > 0) {
            items[i - 1].next = &items[i];
        }
    }
    iota_collect(&items[0], &stats);
    const struct iota_item *hit = iota_find(&items[0], n / 2);
    if (hit == 0) {
        return -1;
    }
    return stats.count + hit->id;
}
