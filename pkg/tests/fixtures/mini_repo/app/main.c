#include <stdio.h>
#include "../core/mathx.h"
#include "../core/vec2.h"
#include "../pipeline/stages.h"
#include "../util/list.h"

int main(void) {
    struct Job job;
    job.id = 1;
    job.payload = 25;
    job.status = 0;
    int rc = stage1_start(&job);
    if (rc < 0) {
        printf("pipeline failed\n");
        return 1;
    }
    struct Vec2 a = vec2_make(1.5, 2.5);
    struct Vec2 b = vec2_make(-0.5, 4.0);
    struct Vec2 c = vec2_add(a, b);
    printf("sum=(%f, %f) dot=%f\n", c.x, c.y, vec2_dot(a, b));
    struct ListNode *head = NULL;
    for (int i = 0; i < 5; i++) {
        head = list_push(head, clampi(i * 7, 0, 20));
    }
    printf("len=%zu sum=%d total=%ld\n", list_length(head), list_sum(head),
           sum_range(1, rc));
    return 0;
}
