#ifndef ETA_MODEL_H
#define ETA_MODEL_H

#define ETA_LIMIT 88

struct eta_item {
    int id;
    double weight;
    struct eta_item *next;
};

struct eta_stats {
    int count;
    double total;
};

void eta_item_init(struct eta_item *it, int id, double weight);
double eta_total_weight(const struct eta_item *head);
const struct eta_item *eta_find(const struct eta_item *head, int id);
void eta_collect(const struct eta_item *head, struct eta_stats *out);

#endif
