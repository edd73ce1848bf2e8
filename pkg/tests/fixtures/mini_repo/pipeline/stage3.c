#include "stages.h"

int stage3_finish(struct Job *job) {
    job->status = 3;
    if (job->payload < 0) {
        return -1;
    }
    return job->payload;
}
