#ifndef PIPELINE_STAGES_H
#define PIPELINE_STAGES_H

struct Job {
    int id;
    int payload;
    int status;
};

int stage1_start(struct Job *job);
int stage2_run(struct Job *job);
int stage3_finish(struct Job *job);

#endif
