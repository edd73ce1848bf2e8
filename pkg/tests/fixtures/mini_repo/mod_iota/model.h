#ifndef IOTA_MODEL_H
#define IOTA_MODEL_H

#define IOTA_LIMIT 104

struct iota_item {
    int id;
    double weight;
    struct iota_item *next;
};

struct iota_stats {
    int count;
    double total;
};

void iota_item_init(struct iota_item *it, int id, double weight);
double iota_total_weight(const struct iota_item *head);
const struct iota_item *iota_find(const struct iota_item *head, int id);
void iota_collect(const struct iota_item *head, struct iota_stats *out);

#endif
