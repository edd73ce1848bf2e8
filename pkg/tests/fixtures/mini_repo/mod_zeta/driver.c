#include "model.h"

int zeta_run(int n) {
    struct zeta_item items[8];
    struct zeta_stats stats;
    for (int i = 0; i < n && i < 8; i++) {
        zeta_item_init(&items[i], i, i * 1.5);
        if (i > 0) {
            items[i - 1].next = &items[i];
        }
    }
    zeta_collect(&items[0], &stats);
    const struct zeta_item *hit = zeta_find(&items[0], n / 2);
    if (hit == 0) {
        return -1;
    }
    return stats.count + hit->id;
}
