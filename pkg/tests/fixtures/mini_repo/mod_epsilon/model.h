#ifndef EPSILON_MODEL_H
#define EPSILON_MODEL_H

#define EPSILON_LIMIT 72

struct epsilon_item {
    int id;
    double weight;
    struct epsilon_item *next;
};

struct epsilon_stats {
    int count;
    double total;
};

void epsilon_item_init(struct epsilon_item *it, int id, double weight);
double epsilon_total_weight(const struct epsilon_item *head);
const struct epsilon_item *epsilon_find(const struct epsilon_item *head, int id);
void epsilon_collect(const struct epsilon_item *head, struct epsilon_stats *out);

#endif
