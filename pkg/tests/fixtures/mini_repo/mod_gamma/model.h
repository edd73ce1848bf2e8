#ifndef GAMMA_MODEL_H
#define GAMMA_MODEL_H

#define GAMMA_LIMIT 56

struct gamma_item {
    int id;
    double weight;
    struct gamma_item *next;
};

struct gamma_stats {
    int count;
    double total;
};

void gamma_item_init(struct gamma_item *it, int id, double weight);
double gamma_total_weight(const struct gamma_item *head);
const struct gamma_item *gamma_find(const struct gamma_item *head, int id);
void gamma_collect(const struct gamma_item *head, struct gamma_stats *out);

#endif
